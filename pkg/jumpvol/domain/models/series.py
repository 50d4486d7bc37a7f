from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from jumpvol.common.errors import InvalidInputError

# パーセントと小数の変換係数
PERCENT_FACTOR = 100.0


class Units(Enum):
    """リターンの単位"""

    # 小数 (0.01 = 1%)
    Decimal = "decimal"
    # パーセント (1.0 = 1%)
    Percent = "percent"


@dataclass(frozen=True)
class PriceSeries:
    """価格系列"""

    # 日付 (狭義単調増加)
    dates: List[date]
    # 価格 (正)
    prices: np.ndarray

    def __init__(self, dates: Sequence[date], prices: Sequence[float]) -> None:
        """イニシャライザ

        Args:
            dates (Sequence[date]): 日付
            prices (Sequence[float]): 価格

        Raises:
            InvalidInputError: 日付と価格の数が一致しません。
            InvalidInputError: 価格系列には2つ以上の観測が必要です。
            InvalidInputError: 日付が狭義単調増加ではありません。
            InvalidInputError: 価格が0以下です。
        """
        values = np.asarray(prices, dtype=float)
        if len(dates) != len(values):
            raise InvalidInputError("日付と価格の数が一致しません。")
        if len(values) < 2:
            raise InvalidInputError("価格系列には2つ以上の観測が必要です。")
        if any(later <= earlier for earlier, later in zip(dates, dates[1:])):
            raise InvalidInputError("日付が狭義単調増加ではありません。")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise InvalidInputError("価格が0以下です。")
        values.setflags(write=False)
        object.__setattr__(self, "dates", list(dates))
        object.__setattr__(self, "prices", values)

    def __len__(self) -> int:  # noqa: D105
        return len(self.prices)


@dataclass(frozen=True)
class ReturnSeries:
    """リターン系列"""

    # 日付 (各リターンの期末日)
    dates: List[date]
    # リターン
    values: np.ndarray
    # 単位
    units: Units
    # 単位変換前の系列 (変換を戻すときに元の値を厳密に返すために保持)
    origin: Optional["ReturnSeries"]

    def __init__(
        self,
        dates: Sequence[date],
        values: Sequence[float],
        units: Units,
        origin: Optional["ReturnSeries"] = None,
    ) -> None:
        """イニシャライザ

        Args:
            dates (Sequence[date]): 日付
            values (Sequence[float]): リターン
            units (Units): 単位
            origin (Optional[ReturnSeries]): 単位変換前の系列

        Raises:
            InvalidInputError: 日付とリターンの数が一致しません。
        """
        array = np.array(values, dtype=float)
        if len(dates) != len(array):
            raise InvalidInputError("日付とリターンの数が一致しません。")
        array.setflags(write=False)
        object.__setattr__(self, "dates", list(dates))
        object.__setattr__(self, "values", array)
        object.__setattr__(self, "units", units)
        object.__setattr__(self, "origin", origin)

    def __len__(self) -> int:  # noqa: D105
        return len(self.values)


def to_log_returns(series: PriceSeries) -> ReturnSeries:
    """価格系列を対数リターン系列に変換する。

    Args:
        series (PriceSeries): 価格系列

    Returns:
        ReturnSeries: 小数単位の対数リターン系列
    """
    values = np.diff(np.log(series.prices))
    return ReturnSeries(series.dates[1:], values, Units.Decimal)


def cumulative_prices(initial: float, returns: ReturnSeries) -> np.ndarray:
    """対数リターンを累積して価格を復元する。

    Args:
        initial (float): 初期価格
        returns (ReturnSeries): 対数リターン系列

    Returns:
        np.ndarray: 初期価格を含む価格
    """
    decimal = rescale(returns, Units.Decimal).values
    log_prices = np.log(initial) + np.concatenate(([0.0], np.cumsum(decimal)))
    return np.exp(log_prices)


def rescale(series: ReturnSeries, target: Units) -> ReturnSeries:
    """リターン系列の単位を変換する。

    変換前の系列を保持しているため、往復変換は元の値をビット単位で再現する。

    Args:
        series (ReturnSeries): リターン系列
        target (Units): 変換後の単位

    Returns:
        ReturnSeries: 変換後のリターン系列
    """
    if series.units == target:
        return series
    if series.origin is not None and series.origin.units == target:
        return series.origin
    if target == Units.Percent:
        values = series.values * PERCENT_FACTOR
    else:
        values = series.values / PERCENT_FACTOR
    return ReturnSeries(series.dates, values, target, origin=series)
