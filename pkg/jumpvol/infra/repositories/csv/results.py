import json
import math
import os
from typing import Any, Dict

import numpy as np
import pandas as pd

from jumpvol.domain.repositories.results import ResultRepository


def to_jsonable(value: Any) -> Any:
    """numpyの値を含むオブジェクトをJSONで表現できる値に変換する。

    有限でない浮動小数点数はNoneに変換する。

    Args:
        value (Any): 変換する値

    Returns:
        Any: 変換した値
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _ensure_directory(path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)


class ResultRepositoryImpl(ResultRepository):
    """ファイルの出力リポジトリ

    同じ内容は常に同じバイト列で保存する。
    """

    def write_json(self, path: str, payload: Dict[str, Any]) -> None:
        """辞書をキーの順に並べたJSONで保存する。

        Args:
            path (str): ファイルのパス
            payload (Dict[str, Any]): 保存する辞書
        """
        _ensure_directory(path)
        with open(path, "wt", encoding="utf-8", newline="\n") as f:
            json.dump(to_jsonable(payload), f, sort_keys=True, indent=2)
            f.write("\n")

    def read_json(self, path: str) -> Dict[str, Any]:
        """JSONを読み込む。

        Args:
            path (str): ファイルのパス

        Returns:
            Dict[str, Any]: 読み込んだ辞書
        """
        with open(path, "rt", encoding="utf-8") as f:
            return json.load(f)

    def write_frame(self, path: str, frame: pd.DataFrame) -> None:
        """データフレームをCSVで保存する。

        Args:
            path (str): ファイルのパス
            frame (pd.DataFrame): 保存するデータフレーム
        """
        _ensure_directory(path)
        frame.to_csv(path, index=False, lineterminator="\n")

    def read_frame(self, path: str) -> pd.DataFrame:
        """CSVを読み込む。

        Args:
            path (str): ファイルのパス

        Returns:
            pd.DataFrame: 読み込んだデータフレーム
        """
        return pd.read_csv(path)
