import logging
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from jumpvol.common.errors import InvalidInputError, NumericalError
from jumpvol.domain.models.mcmc import PosteriorSummary
from jumpvol.domain.models.series import ReturnSeries, Units, rescale

logger = logging.getLogger(__name__)

# QQプロットに推奨する残差の数
MIN_QQ_POINTS = 10

# 判定したジャンプの割合を比較するときの許容誤差
_FRACTION_TOLERANCE = 1e-12


def detect_jumps(jump_probs: np.ndarray, lambda_hat: float) -> np.ndarray:
    """ジャンプ確率が閾値を超えた日をジャンプと判定する。

    閾値は、判定したジャンプの割合がlambda_hat以上になる最大の値とする。
    境界の確率を持つ日はすべてジャンプと判定する。

    Args:
        jump_probs (np.ndarray): 日ごとのジャンプ確率
        lambda_hat (float): ジャンプ強度の事後平均

    Raises:
        InvalidInputError: ジャンプ確率が0以上1以下ではありません。

    Returns:
        np.ndarray: 日ごとのジャンプ判定 (0または1)
    """
    probs = np.asarray(jump_probs, dtype=float)
    if np.any((probs < 0) | (probs > 1)):
        raise InvalidInputError("ジャンプ確率が0以上1以下ではありません。")
    flagged = np.zeros(len(probs), dtype=np.int8)
    if len(probs) == 0 or lambda_hat <= 0:
        return flagged
    # 正の確率を降順に調べ、割合がlambda_hatに達した確率を境界とする
    levels = np.unique(probs[probs > 0])[::-1]
    if len(levels) == 0:
        return flagged
    boundary = levels[-1]
    for level in levels:
        if np.mean(probs >= level) >= lambda_hat - _FRACTION_TOLERANCE:
            boundary = level
            break
    flagged[probs >= boundary] = 1
    return flagged


def _fit_errors(returns: ReturnSeries, summary: PosteriorSummary) -> np.ndarray:
    """1期先の当てはめ誤差を返す。

    Args:
        returns (ReturnSeries): リターン系列
        summary (PosteriorSummary): 同じリターン系列から求めた事後分布の要約

    Raises:
        InvalidInputError: リターンと事後分布の要約の長さが一致しません。

    Returns:
        np.ndarray: Y_t - mu - Zy_t * J_t
    """
    y = rescale(returns, Units.Percent).values
    if len(y) != len(summary.detected_jumps):
        raise InvalidInputError("リターンと事後分布の要約の長さが一致しません。")
    return y - summary.mean["mu"] - summary.jump_size_y * summary.detected_jumps


def standardized_residuals(
    returns: ReturnSeries, summary: PosteriorSummary
) -> np.ndarray:
    """事後平均を用いた標準化残差を返す。

    Args:
        returns (ReturnSeries): リターン系列
        summary (PosteriorSummary): 同じリターン系列から求めた事後分布の要約

    Raises:
        NumericalError: 分散の事後平均が正ではありません。

    Returns:
        np.ndarray: 標準化残差
    """
    previous = summary.variance_path[:-1]
    if np.any(previous <= 0):
        raise NumericalError("分散の事後平均が正ではありません。")
    return _fit_errors(returns, summary) / np.sqrt(previous)


def mse(returns: ReturnSeries, summary: PosteriorSummary) -> float:
    """1期先の当てはめ誤差の平均二乗誤差を返す。

    すべてのモデルでパーセント単位のリターンに対して計算する。

    Args:
        returns (ReturnSeries): リターン系列
        summary (PosteriorSummary): 同じリターン系列から求めた事後分布の要約

    Returns:
        float: 平均二乗誤差
    """
    return float(np.mean(_fit_errors(returns, summary) ** 2))


def qq_points(
    residuals: np.ndarray, nu: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """QQプロットの点を返す。

    理論分位点は、プロット位置 (i - 0.5) / n における標準正規分布の分位点、
    自由度nuを与えた場合は分散1に標準化したt分布の分位点とする。

    Args:
        residuals (np.ndarray): 残差
        nu (Optional[float]): t分布の自由度

    Raises:
        InvalidInputError: 残差がありません。

    Returns:
        Tuple[np.ndarray, np.ndarray]: 理論分位点と昇順に並べた残差
    """
    values = np.sort(np.asarray(residuals, dtype=float))
    n = len(values)
    if n == 0:
        raise InvalidInputError("残差がありません。")
    if n < MIN_QQ_POINTS:
        logger.warning("QQプロットの残差が少なすぎます (n=%d)。", n)
    positions = (np.arange(1, n + 1) - 0.5) / n
    if nu is None:
        theoretical = stats.norm.ppf(positions)
    else:
        theoretical = stats.t.ppf(positions, nu) * np.sqrt((nu - 2.0) / nu)
    return theoretical, values
