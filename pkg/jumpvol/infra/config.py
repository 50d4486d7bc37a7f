# 実行設定ファイルの読み書き
#
# 設定ファイルはセクション付きのキーと値の形式 (configparser) で、セクションは
# RunConfigの属性に対応する。リストはカンマ区切り、Noneは空文字列で表す。
# 環境変数 JUMPVOL_<SECTION>__<KEY> はファイルの値を上書きする。

import configparser
import dataclasses
import enum
import os
import typing
from typing import Any, Dict, List, Mapping, Optional, Tuple

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.mcmc import PriorSpec
from jumpvol.domain.models.runs import RunConfig

# 環境変数の接頭辞
ENV_PREFIX = "JUMPVOL_"

# 事前分布の上書きを記録するセクション
PRIORS_SECTION = "priors"


def _sections() -> List[Tuple[str, type]]:
    """RunConfigのセクション名とデータクラスを定義順に返す。"""
    hints = typing.get_type_hints(RunConfig)
    return [
        (f.name, hints[f.name])
        for f in dataclasses.fields(RunConfig)
        if f.name != PRIORS_SECTION
    ]


def _unwrap_optional(tp: Any) -> Tuple[Any, bool]:
    args = typing.get_args(tp)
    if typing.get_origin(tp) is typing.Union and type(None) in args:
        return next(a for a in args if a is not type(None)), True
    return tp, False


def parse_value(text: str, tp: Any) -> Any:
    """設定ファイルの文字列を型に従って変換する。

    Args:
        text (str): 文字列
        tp (Any): 属性の型

    Raises:
        InvalidInputError: 値を変換できません。

    Returns:
        Any: 変換した値
    """
    tp, optional = _unwrap_optional(tp)
    text = text.strip()
    if optional and text == "":
        return None
    try:
        if typing.get_origin(tp) in (list, List):
            (item,) = typing.get_args(tp)
            return [parse_value(t, item) for t in text.split(",") if t.strip()]
        if isinstance(tp, type) and issubclass(tp, enum.Enum):
            return tp(text)
        if tp is bool:
            return text.lower() in ("1", "true", "yes", "on")
        if tp is int:
            return int(text)
        if tp is float:
            return float(text)
        return text
    except ValueError as e:
        raise InvalidInputError(f"値を変換できません ({text!r}): {e}") from e


def format_value(value: Any) -> str:
    """値を設定ファイルの文字列に変換する。

    浮動小数点数はreprで表し、読み込んだときに同じ値に戻るようにする。

    Args:
        value (Any): 値

    Returns:
        str: 文字列
    """
    if value is None:
        return ""
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, (list, tuple)):
        return ", ".join(format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _env_overrides(environ: Mapping[str, str]) -> Dict[str, Dict[str, str]]:
    overrides: Dict[str, Dict[str, str]] = {}
    for name, value in environ.items():
        if not name.startswith(ENV_PREFIX) or "__" not in name:
            continue
        section, key = name[len(ENV_PREFIX) :].split("__", 1)
        overrides.setdefault(section.lower(), {})[key.lower()] = value
    return overrides


def config_from_parser(parser: configparser.ConfigParser) -> RunConfig:
    """パース済みの設定からRunConfigを構築する。

    Args:
        parser (configparser.ConfigParser): 設定

    Raises:
        InvalidInputError: 存在しないセクションまたはキーです。

    Returns:
        RunConfig: 実行設定
    """
    sections = dict(_sections())
    unknown = set(parser.sections()) - set(sections) - {PRIORS_SECTION}
    if unknown:
        raise InvalidInputError(f"存在しないセクションです: {sorted(unknown)}")
    values: Dict[str, Any] = {}
    for name, cls in sections.items():
        if not parser.has_section(name):
            continue
        hints = typing.get_type_hints(cls)
        items = dict(parser.items(name))
        bad = set(items) - set(hints)
        if bad:
            raise InvalidInputError(f"[{name}]に存在しないキーです: {sorted(bad)}")
        kwargs = {key: parse_value(text, hints[key]) for key, text in items.items()}
        try:
            values[name] = cls(**kwargs)
        except ValueError as e:
            raise InvalidInputError(f"[{name}]の設定が不正です: {e}") from e
    if parser.has_section(PRIORS_SECTION):
        priors = {k: parse_value(v, float) for k, v in parser.items(PRIORS_SECTION)}
        try:
            PriorSpec().overridden(priors)
        except ValueError as e:
            raise InvalidInputError(f"[priors]の設定が不正です: {e}") from e
        values[PRIORS_SECTION] = priors
    try:
        return RunConfig(**values)
    except ValueError as e:
        raise InvalidInputError(str(e)) from e


def load_config(
    path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None
) -> RunConfig:
    """設定ファイルと環境変数から実行設定を読み込む。

    Args:
        path (Optional[str]): 設定ファイルのパス (Noneの場合は既定値)
        environ (Optional[Mapping[str, str]]): 環境変数 (Noneの場合はos.environ)

    Raises:
        InvalidInputError: 設定ファイルが存在しません。

    Returns:
        RunConfig: 実行設定
    """
    parser = configparser.ConfigParser(interpolation=None)
    if path is not None:
        if not os.path.isfile(path):
            raise InvalidInputError(f"設定ファイルが存在しません: {path}")
        with open(path, "rt", encoding="utf-8") as f:
            parser.read_file(f)
    overrides = _env_overrides(os.environ if environ is None else environ)
    for section, items in overrides.items():
        if not parser.has_section(section):
            parser.add_section(section)
        for key, value in items.items():
            parser.set(section, key, value)
    return config_from_parser(parser)


def config_to_parser(cfg: RunConfig) -> configparser.ConfigParser:
    """実行設定を設定ファイルの表現に変換する。

    Args:
        cfg (RunConfig): 実行設定

    Returns:
        configparser.ConfigParser: 設定
    """
    parser = configparser.ConfigParser(interpolation=None)
    for name, _ in _sections():
        section = getattr(cfg, name)
        parser.add_section(name)
        for f in dataclasses.fields(section):
            parser.set(name, f.name, format_value(getattr(section, f.name)))
    parser.add_section(PRIORS_SECTION)
    for key in sorted(cfg.priors):
        parser.set(PRIORS_SECTION, key, format_value(float(cfg.priors[key])))
    return parser


def write_config(cfg: RunConfig, path: str) -> None:
    """実行設定を設定ファイルに保存する。

    Args:
        cfg (RunConfig): 実行設定
        path (str): 設定ファイルのパス
    """
    with open(path, "wt", encoding="utf-8", newline="\n") as f:
        config_to_parser(cfg).write(f)


def describe_keys() -> List[str]:
    """設定ファイルのすべてのキーと既定値の説明を返す。

    Returns:
        List[str]: "[section] key = default" 形式の行
    """
    lines = []
    parser = config_to_parser(RunConfig())
    for section in parser.sections():
        for key, value in parser.items(section):
            lines.append(f"[{section}] {key} = {value}")
    names = [f.name for f in dataclasses.fields(PriorSpec)]
    lines.append(f"[{PRIORS_SECTION}] 上書きできるキー: {', '.join(names)}")
    return lines
