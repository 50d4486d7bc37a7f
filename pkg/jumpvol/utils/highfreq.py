import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from jumpvol.common.errors import DegenerateWindowError, InvalidInputError
from jumpvol.domain.models.intraday import (
    MINUTES_PER_DAY,
    CrossMomentEstimate,
    IntradayPanel,
    SpotVariancePanel,
    is_valid_order,
)

logger = logging.getLogger(__name__)

# 標準正規分布の絶対値の期待値 sqrt(2 / pi)
ZETA1 = math.sqrt(2.0 / math.pi)

# 閾値の既定の倍率
DEFAULT_THRESHOLD_MULT = 4.0

# 閾値の刻み幅の指数
THRESHOLD_EXPONENT = 0.49

# 1日の長さ (日)
DELTA = 1.0

# カーネル質量がこの値未満の評価点は欠損とする
KERNEL_MASS_FLOOR = 1e-10

# 評価点を置くスポット・ボラティリティの分位点の範囲
GRID_QUANTILES: Tuple[float, float] = (0.1, 0.9)

# 観測の間隔 (秒)
SAMPLING_SECONDS = 60

# NIMMで用いる交差モーメントの次数
REQUIRED_ORDERS: List[Tuple[int, int]] = [
    (1, 0),
    (2, 0),
    (0, 1),
    (0, 2),
    (1, 1),
    (2, 1),
    (2, 2),
    (4, 0),
    (0, 4),
]


def panel_from_prices(
    timestamps: Sequence, prices: Sequence[float], minutes_per_knot: int = 60
) -> IntradayPanel:
    """60秒間隔の価格を日 x ノット x 分のパネルに集計する。

    各分のリターンはその分の開始時刻の日に属するものとし、1440個のリターンが
    そろった日だけを用いる。

    Args:
        timestamps (Sequence): 時刻
        prices (Sequence[float]): 価格
        minutes_per_knot (int): ノット当たりの分数

    Raises:
        InvalidInputError: 1日の分数がノット当たりの分数で割り切れません。
        InvalidInputError: 価格が0以下です。
        InvalidInputError: 時刻が60秒間隔ではありません。
        InvalidInputError: 1日分そろった観測がありません。

    Returns:
        IntradayPanel: パネル
    """
    if minutes_per_knot < 2 or MINUTES_PER_DAY % minutes_per_knot != 0:
        raise InvalidInputError("1日の分数がノット当たりの分数で割り切れません。")
    values = np.asarray(prices, dtype=float)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise InvalidInputError("価格が0以下です。")
    log_prices = pd.Series(np.log(values), index=pd.DatetimeIndex(timestamps))
    log_prices = log_prices.sort_index()
    steps = log_prices.index.to_series().diff().dropna()
    if (steps != pd.Timedelta(seconds=SAMPLING_SECONDS)).any():
        raise InvalidInputError("時刻が60秒間隔ではありません。")

    # 開始時刻でラベル付けしたリターン
    returns = (log_prices.shift(-1) - log_prices).dropna()
    days = [
        (day, group.to_numpy())
        for day, group in returns.groupby(returns.index.normalize())
        if len(group) == MINUTES_PER_DAY
    ]
    if not days:
        raise InvalidInputError("1日分そろった観測がありません。")
    knots = MINUTES_PER_DAY // minutes_per_knot
    panel = np.stack([minutes for _, minutes in days]).reshape(
        len(days), knots, minutes_per_knot
    )
    opens = np.array([log_prices.loc[day] for day, _ in days])
    cumulative = np.cumsum(panel.reshape(len(days), -1), axis=1)
    closes = opens[:, None] + cumulative.reshape(panel.shape)[:, :, -1]
    logger.info("高頻度パネルを作成しました (days=%d, knots=%d)。", len(days), knots)
    return IntradayPanel(panel, closes)


def spot_variance_tbv(
    panel: IntradayPanel, threshold_mult: float = DEFAULT_THRESHOLD_MULT
) -> SpotVariancePanel:
    """閾値付きバイパワー変動でノットごとのスポット分散を推定する。

    閾値は、窓の閾値なしバイパワー変動の平方根に threshold_mult * (1 / M)^0.49 を
    掛けた値とする。threshold_multが無限大の場合は閾値なしのバイパワー変動になる。

    Args:
        panel (IntradayPanel): パネル
        threshold_mult (float): 閾値の倍率

    Raises:
        ValueError: 閾値の倍率が正ではありません。
        DegenerateWindowError: 閾値を超えたリターンが多すぎて推定できない窓があります。

    Returns:
        SpotVariancePanel: ノットの積分分散の推定値
    """
    if not threshold_mult > 0:
        raise ValueError("閾値の倍率が正ではありません。")
    m = panel.minutes_per_knot
    size = np.abs(panel.returns)
    products = size[..., 1:] * size[..., :-1]
    if math.isinf(threshold_mult):
        theta = np.full(size.shape[:2], np.inf)
    else:
        local_bv = (math.pi / 2.0) * m / (m - 1.0) * products.sum(axis=-1)
        theta = threshold_mult * np.sqrt(local_bv) * (1.0 / m) ** THRESHOLD_EXPONENT
    kept = size <= theta[..., None]
    n_j = np.sum(~kept, axis=-1)
    denominator = m - 1 - n_j
    if np.any(denominator <= 0):
        day, knot = np.argwhere(denominator <= 0)[0]
        raise DegenerateWindowError(
            "閾値を超えたリターンが多すぎて推定できない窓があります "
            f"(day={day}, knot={knot})。"
        )
    thresholded = np.sum(products * kept[..., 1:] * kept[..., :-1], axis=-1)
    sigma2_hat = m / denominator * ZETA1**-2 * thresholded
    return SpotVariancePanel(sigma2_hat, n_j, panel.knot_days)


def rule_of_thumb_bandwidth(values: np.ndarray) -> float:
    """ガウス・カーネルの経験則によるバンド幅を返す。

    Args:
        values (np.ndarray): 標本

    Raises:
        InvalidInputError: 標本のばらつきがなくバンド幅を決められません。

    Returns:
        float: 1.06 * std * n^(-1/5)
    """
    values = np.asarray(values, dtype=float)
    bandwidth = 1.06 * float(np.std(values)) * len(values) ** -0.2
    if not bandwidth > 0:
        raise InvalidInputError("標本のばらつきがなくバンド幅を決められません。")
    return bandwidth


def default_grid(spot: SpotVariancePanel, points: int) -> np.ndarray:
    """スポット・ボラティリティの分布の中央80%に評価点を置く。

    Args:
        spot (SpotVariancePanel): スポット分散
        points (int): 評価点の数

    Returns:
        np.ndarray: 狭義単調増加の評価点
    """
    sigma = np.sqrt(spot.daily_variance()[:-1]).reshape(-1)
    return np.unique(np.quantile(sigma, np.linspace(*GRID_QUANTILES, points)))


def cross_moment_kernel(
    log_prices: np.ndarray,
    spot: SpotVariancePanel,
    p1: int,
    p2: int,
    grid: np.ndarray,
    h: Optional[float] = None,
) -> CrossMomentEstimate:
    """無限小交差モーメントをガウス・カーネルで推定する。

    同じノットの翌日までの対数価格の変化と対数スポット分散の変化を、当日の
    スポット・ボラティリティ (1日当たり) で条件付けて平均する。

    Args:
        log_prices (np.ndarray): ノットの終値の対数価格 (日数, ノット数)
        spot (SpotVariancePanel): スポット分散
        p1 (int): 価格の次数
        p2 (int): 対数分散の次数
        grid (np.ndarray): 評価点
        h (Optional[float]): バンド幅 (Noneの場合は経験則)

    Raises:
        ValueError: 次数が不正です。
        ValueError: バンド幅が正ではありません。
        InvalidInputError: 対数価格とスポット分散の形状が一致しません。

    Returns:
        CrossMomentEstimate: 推定値
    """
    if not is_valid_order(p1, p2):
        raise ValueError("次数が不正です。")
    if h is not None and not h > 0:
        raise ValueError("バンド幅が正ではありません。")
    variance = spot.daily_variance()
    if log_prices.shape != variance.shape:
        raise InvalidInputError("対数価格とスポット分散の形状が一致しません。")

    with np.errstate(divide="ignore"):
        log_variance = np.log(variance)
    d_price = (log_prices[1:] - log_prices[:-1]).reshape(-1)
    d_log_var = (log_variance[1:] - log_variance[:-1]).reshape(-1)
    sigma = np.sqrt(variance[:-1]).reshape(-1)
    usable = np.isfinite(d_price) & (np.isfinite(d_log_var) | (p2 == 0))
    payoff = d_price[usable] ** p1
    if p2 > 0:
        payoff = payoff * d_log_var[usable] ** p2
    sigma = sigma[usable]

    bandwidth = rule_of_thumb_bandwidth(sigma) if h is None else h
    grid = np.asarray(grid, dtype=float)
    weights = np.exp(-0.5 * ((sigma[None, :] - grid[:, None]) / bandwidth) ** 2)
    mass = weights.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = (weights @ payoff) / (DELTA * mass)
        spread = weights**2 * (payoff[None, :] / DELTA - theta[:, None]) ** 2
        std_error = np.sqrt(spread.sum(axis=1)) / mass
    missing = mass < KERNEL_MASS_FLOOR
    theta[missing] = np.nan
    std_error[missing] = np.nan
    if missing.any():
        logger.info(
            "カーネル質量が不足する評価点があります (order=(%d, %d), points=%d)。",
            p1,
            p2,
            int(missing.sum()),
        )
    return CrossMomentEstimate(p1, p2, grid, theta, std_error, bandwidth)


def cross_moments(
    log_prices: np.ndarray,
    spot: SpotVariancePanel,
    orders: Iterable[Tuple[int, int]],
    grid: np.ndarray,
    h: Optional[float] = None,
) -> Dict[Tuple[int, int], CrossMomentEstimate]:
    """複数の次数の交差モーメントを推定する。

    Args:
        log_prices (np.ndarray): ノットの終値の対数価格
        spot (SpotVariancePanel): スポット分散
        orders (Iterable[Tuple[int, int]]): 次数
        grid (np.ndarray): 評価点
        h (Optional[float]): バンド幅

    Returns:
        Dict[Tuple[int, int], CrossMomentEstimate]: 次数ごとの推定値
    """
    return {
        (p1, p2): cross_moment_kernel(log_prices, spot, p1, p2, grid, h)
        for p1, p2 in orders
    }
