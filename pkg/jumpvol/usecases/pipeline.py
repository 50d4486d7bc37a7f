import dataclasses
import enum
import hashlib
import json
import logging
import os
from typing import Any, Callable, Dict, List, Mapping

from jumpvol import VERSION
from jumpvol.common.errors import InvalidInputError, StageError
from jumpvol.domain.models.runs import RunConfig, RunManifest
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.usecases.baselines import fit_arima_model, fit_garch_models
from jumpvol.usecases.estimation import fit_model
from jumpvol.usecases.highfreq import (
    calibrate_br,
    estimate_cross_moments,
    estimate_spot_variance,
)
from jumpvol.usecases.pricing import implied_vol_surface, price_option, price_table
from jumpvol.usecases.simulate import simulate_returns

logger = logging.getLogger(__name__)

# ファイルを読み込む単位 (バイト)
CHUNK_BYTES = 1 << 20

Stage = Callable[[RepositoryManager, RunConfig, List[str]], List[str]]


def file_checksum(path: str) -> str:
    """ファイルのSHA-256チェックサムを返す。

    Args:
        path (str): ファイルのパス

    Returns:
        str: チェックサム (16進数)
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(CHUNK_BYTES), b""):
            digest.update(chunk)
    return digest.hexdigest()


def input_checksums(cfg: RunConfig) -> Dict[str, str]:
    """入力ファイルのチェックサムを返す。

    Args:
        cfg (RunConfig): 実行設定

    Raises:
        InvalidInputError: 入力ファイルが存在しません。

    Returns:
        Dict[str, str]: 入力ファイルのパスとチェックサム
    """
    checksums = {}
    for path in (cfg.core.prices_path, cfg.core.intraday_path):
        if path is None:
            continue
        if not os.path.isfile(path):
            raise InvalidInputError(f"入力ファイルが存在しません: {path}")
        checksums[path] = file_checksum(path)
    return checksums


def _plain(value: Any) -> Any:
    if isinstance(value, enum.Enum):
        return value.value
    raise TypeError(f"JSONに変換できません: {value!r}")


def config_hash(cfg: RunConfig, checksums: Mapping[str, str]) -> str:
    """設定、入力ファイルのチェックサム、バージョンのハッシュを返す。

    スレッド数は出力に影響しないためハッシュに含めない。

    Args:
        cfg (RunConfig): 実行設定
        checksums (Mapping[str, str]): 入力ファイルのチェックサム

    Returns:
        str: SHA-256のハッシュ (16進数)
    """
    config = dataclasses.asdict(cfg)
    del config["core"]["threads"]
    payload = {"config": config, "inputs": dict(checksums), "version": VERSION}
    text = json.dumps(payload, sort_keys=True, default=_plain)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _is_intact(manifest: RunManifest) -> bool:
    return all(
        os.path.isfile(path) and file_checksum(path) == checksum
        for path, checksum in manifest.outputs
    )


STAGE_RUNNERS: Dict[str, Stage] = {
    "simulate": lambda rm, cfg, stages: simulate_returns(rm, cfg),
    "fit": lambda rm, cfg, stages: fit_model(rm, cfg),
    "price": lambda rm, cfg, stages: price_option(
        rm, cfg, "fit" in stages, "nimm" in stages
    ),
    "price_grid": lambda rm, cfg, stages: price_table(
        rm, cfg, "fit" in stages, "nimm" in stages
    ),
    "iv_surface": lambda rm, cfg, stages: implied_vol_surface(
        rm, cfg, "fit" in stages, "nimm" in stages
    ),
    "spotvar": lambda rm, cfg, stages: estimate_spot_variance(rm, cfg),
    "crossmom": lambda rm, cfg, stages: estimate_cross_moments(rm, cfg),
    "nimm": lambda rm, cfg, stages: calibrate_br(rm, cfg),
    "fit_arima": lambda rm, cfg, stages: fit_arima_model(rm, cfg),
    "fit_garch": lambda rm, cfg, stages: fit_garch_models(rm, cfg),
}


def run_pipeline(
    repo_manager: RepositoryManager, cfg: RunConfig, force: bool = False
) -> RunManifest:
    """設定されたステージを依存関係の順に実行し、実行記録を登録する。

    同じ設定と入力で完了した実行記録があり、出力ファイルが変更されていない場合は
    何も実行せずにその実行記録を返す。価格計算のステージは、同じ実行で推定した
    ステージがあればその推定値を用いる。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        force (bool): 完了した実行記録があっても再実行するか

    Raises:
        StageError: ステージが失敗しました。

    Returns:
        RunManifest: 実行記録
    """
    stages = cfg.ordered_stages()
    checksums = input_checksums(cfg)
    digest = config_hash(cfg, checksums)
    repo = repo_manager.manifest()

    existing = repo.by_hash(digest)
    if existing is not None and existing.complete and not force:
        if _is_intact(existing):
            logger.info("出力は最新です (hash=%s)。", digest[:12])
            existing.up_to_date = True
            return existing
        logger.info("出力ファイルが変更されているため再実行します。")

    manifest = RunManifest(digest, VERSION, [cfg.core.seed], checksums)
    for stage in stages:
        logger.info("ステージ%sを実行します。", stage)
        try:
            paths = STAGE_RUNNERS[stage](repo_manager, cfg, stages)
        except Exception as e:
            repo.register(manifest)
            raise StageError(f"ステージ{stage}が失敗しました: {e}", stage) from e
        manifest.outputs.extend((path, file_checksum(path)) for path in paths)
        manifest.completed_stages.append(stage)
    manifest.complete = True
    repo.register(manifest)
    logger.info(
        "パイプラインが完了しました (stages=%d, outputs=%d)。",
        len(stages),
        len(manifest.outputs),
    )
    return manifest
