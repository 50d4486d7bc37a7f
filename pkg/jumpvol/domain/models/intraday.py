from dataclasses import dataclass
from typing import Optional

import numpy as np

# 1日の分数
MINUTES_PER_DAY = 1440


@dataclass(frozen=True)
class IntradayPanel:
    """日 x ノット x 分の高頻度対数リターン (小数単位)"""

    # リターン (形状は (日数, ノット数, ノット当たりの分数))
    returns: np.ndarray
    # ノットの終値の対数価格 (形状は (日数, ノット数))
    log_closes: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        """パネルを検証する。

        Raises:
            ValueError: リターンは3次元の配列でなければなりません。
            ValueError: 1日のノット数が1未満です。
            ValueError: ノット当たりの分数が2未満です。
            ValueError: 終値の形状がリターンと一致しません。
        """
        if self.returns.ndim != 3:
            raise ValueError("リターンは3次元の配列でなければなりません。")
        if self.returns.shape[1] < 1:
            raise ValueError("1日のノット数が1未満です。")
        if self.returns.shape[2] < 2:
            raise ValueError("ノット当たりの分数が2未満です。")
        closes = self.log_closes
        if closes is not None and closes.shape != self.returns.shape[:2]:
            raise ValueError("終値の形状がリターンと一致しません。")

    @property
    def days(self) -> int:
        """日数を返す。

        Returns:
            int: 日数
        """
        return self.returns.shape[0]

    @property
    def knots_per_day(self) -> int:
        """1日のノット数を返す。

        Returns:
            int: 1日のノット数
        """
        return self.returns.shape[1]

    @property
    def minutes_per_knot(self) -> int:
        """ノット当たりの分数を返す。

        Returns:
            int: ノット当たりの分数
        """
        return self.returns.shape[2]

    @property
    def knot_days(self) -> float:
        """1ノットの長さを日単位で返す。

        Returns:
            float: 1ノットの長さ (日)
        """
        return self.minutes_per_knot / MINUTES_PER_DAY

    def closes(self) -> np.ndarray:
        """ノットの終値の対数価格を返す。

        終値が与えられていない場合は、リターンを累積して0から始まる対数価格を返す。

        Returns:
            np.ndarray: 形状 (日数, ノット数) の対数価格
        """
        if self.log_closes is not None:
            return self.log_closes
        flat = np.cumsum(self.returns.reshape(-1))
        return flat.reshape(self.returns.shape)[:, :, -1]


@dataclass(frozen=True)
class SpotVariancePanel:
    """ノットごとのスポット分散推定値"""

    # ノットの積分分散の推定値 (形状は (日数, ノット数))
    sigma2_hat: np.ndarray
    # 閾値を超えたリターンの数
    n_j: np.ndarray
    # 1ノットの長さ (日)
    knot_days: float

    def __post_init__(self) -> None:
        """パネルを検証する。

        Raises:
            ValueError: スポット分散が負です。
            ValueError: 1ノットの長さが正ではありません。
        """
        if np.any(self.sigma2_hat < 0):
            raise ValueError("スポット分散が負です。")
        if not self.knot_days > 0:
            raise ValueError("1ノットの長さが正ではありません。")

    def daily_variance(self) -> np.ndarray:
        """1日当たりに換算したスポット分散を返す。

        Returns:
            np.ndarray: 1日当たりのスポット分散
        """
        return self.sigma2_hat / self.knot_days

    def daily_average_volatility(self) -> np.ndarray:
        """ノットで平均した日ごとのスポット・ボラティリティを返す。

        Returns:
            np.ndarray: 日ごとの平均スポット・ボラティリティ (1日当たり)
        """
        return np.sqrt(self.daily_variance()).mean(axis=1)


def is_valid_order(p1: int, p2: int) -> bool:
    """交差モーメントの次数が妥当か確認する。

    p1 >= p2 >= 0 の組に加えて、分散過程だけを識別する (0, p2) も許す。

    Args:
        p1 (int): 価格の次数
        p2 (int): 対数分散の次数

    Returns:
        bool: 妥当な場合はTrue
    """
    if p1 < 0 or p2 < 0 or (p1, p2) == (0, 0):
        return False
    return p1 >= p2 or p1 == 0


@dataclass(frozen=True)
class CrossMomentEstimate:
    """無限小交差モーメントのカーネル推定値"""

    # 次数 (価格)
    p1: int
    # 次数 (対数分散)
    p2: int
    # 評価点 (スポット・ボラティリティ)
    sigma_grid: np.ndarray
    # 推定値 (カーネル質量が不足する評価点はnan)
    theta_hat: np.ndarray
    # 推定値の標準誤差
    std_error: np.ndarray
    # バンド幅
    bandwidth: float
    # カーネル名
    kernel: str = "gaussian"

    def __post_init__(self) -> None:
        """推定値を検証する。

        Raises:
            ValueError: 次数が不正です。
            ValueError: 評価点が狭義単調増加ではありません。
            ValueError: バンド幅が正ではありません。
        """
        if not is_valid_order(self.p1, self.p2):
            raise ValueError("次数が不正です。")
        if np.any(np.diff(self.sigma_grid) <= 0):
            raise ValueError("評価点が狭義単調増加ではありません。")
        if not self.bandwidth > 0:
            raise ValueError("バンド幅が正ではありません。")

    @property
    def order(self) -> tuple:
        """次数の組を返す。

        Returns:
            tuple: (p1, p2)
        """
        return (self.p1, self.p2)
