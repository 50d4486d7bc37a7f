import abc
from typing import Any, Dict

import pandas as pd


class ResultRepository(abc.ABC):
    """推定結果や価格表などの出力のリポジトリ

    スカラーやパラメーターはJSON、系列や行列はCSVで保存する。
    """

    @abc.abstractmethod
    def write_json(self, path: str, payload: Dict[str, Any]) -> None:
        """辞書をJSONで保存する。

        Args:
            path (str): ファイルのパス
            payload (Dict[str, Any]): 保存する辞書
        """
        pass

    @abc.abstractmethod
    def read_json(self, path: str) -> Dict[str, Any]:
        """JSONを読み込む。

        Args:
            path (str): ファイルのパス

        Returns:
            Dict[str, Any]: 読み込んだ辞書
        """
        pass

    @abc.abstractmethod
    def write_frame(self, path: str, frame: pd.DataFrame) -> None:
        """データフレームをCSVで保存する。

        Args:
            path (str): ファイルのパス
            frame (pd.DataFrame): 保存するデータフレーム
        """
        pass

    @abc.abstractmethod
    def read_frame(self, path: str) -> pd.DataFrame:
        """CSVを読み込む。

        Args:
            path (str): ファイルのパス

        Returns:
            pd.DataFrame: 読み込んだデータフレーム
        """
        pass
