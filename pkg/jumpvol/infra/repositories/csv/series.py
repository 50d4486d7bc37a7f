# CSVの具象日次価格リポジトリ
#
# 価格ファイルは date,price、リターンファイルは date,return (小数単位) の列を持つ。
# 以前の形式の log_return 列も読み込める。
# 潜在変数を保存する場合は、パーセント単位の V (期首の分散)、J、Zy、Zv の列を加える。

import os
from typing import Optional

import pandas as pd

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.series import (
    PriceSeries,
    ReturnSeries,
    Units,
    rescale,
    to_log_returns,
)
from jumpvol.domain.models.svcj import LatentPath
from jumpvol.domain.repositories.series import PriceSeriesRepository

# リターンの列名 (先頭が保存に使う列名)
RETURN_COLUMNS = ("return", "log_return")


def _read(path: str) -> pd.DataFrame:
    """CSVを読み込み、日付の列を変換する。"""
    frame = pd.read_csv(path)
    if "date" not in frame.columns:
        raise InvalidInputError(f"date列がありません: {path}")
    frame["date"] = pd.to_datetime(frame["date"]).dt.date
    return frame


class PriceSeriesRepositoryImpl(PriceSeriesRepository):
    """CSVの日次価格リポジトリ"""

    def load_prices(self, path: str) -> PriceSeries:
        """日次価格を読み込む。

        Args:
            path (str): ファイルのパス

        Raises:
            InvalidInputError: price列がありません。

        Returns:
            PriceSeries: 価格系列
        """
        frame = _read(path)
        if "price" not in frame.columns:
            raise InvalidInputError(f"price列がありません: {path}")
        return PriceSeries(list(frame["date"]), frame["price"].to_numpy(dtype=float))

    def load_returns(self, path: str) -> ReturnSeries:
        """日次対数リターンを読み込む。

        Args:
            path (str): ファイルのパス

        Raises:
            InvalidInputError: リターンの列もprice列もありません。

        Returns:
            ReturnSeries: 小数単位の対数リターン系列
        """
        frame = _read(path)
        for column in RETURN_COLUMNS:
            if column in frame.columns:
                values = frame[column].to_numpy(dtype=float)
                return ReturnSeries(list(frame["date"]), values, Units.Decimal)
        if "price" in frame.columns:
            return to_log_returns(self.load_prices(path))
        raise InvalidInputError(f"リターンの列もprice列もありません: {path}")

    def save_returns(
        self, path: str, returns: ReturnSeries, latent: Optional[LatentPath] = None
    ) -> None:
        """日次対数リターンと潜在変数を保存する。

        Args:
            path (str): ファイルのパス
            returns (ReturnSeries): リターン系列
            latent (Optional[LatentPath]): 潜在変数
        """
        frame = pd.DataFrame(
            {
                "date": [d.isoformat() for d in returns.dates],
                RETURN_COLUMNS[0]: rescale(returns, Units.Decimal).values,
            }
        )
        if latent is not None:
            frame["V"] = latent.V[:-1]
            frame["J"] = latent.J
            frame["Zy"] = latent.Zy
            frame["Zv"] = latent.Zv
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n")
