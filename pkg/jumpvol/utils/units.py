import math
from dataclasses import replace

import numpy as np

from jumpvol.domain.models.br import BrParams
from jumpvol.domain.models.series import PERCENT_FACTOR
from jumpvol.domain.models.svcj import SvcjParams

# 分散の変換係数
VARIANCE_FACTOR = PERCENT_FACTOR**2


def svcj_to_decimal(params: SvcjParams) -> SvcjParams:
    """パーセント単位のリターンで推定したSVCJパラメーターを小数単位に変換する。

    リターンの次元を持つパラメーターは1/100、分散の次元を持つパラメーターは1/10000にする。
    sigma_vはsqrt(V)との積が分散の次元を持つので1/100、rho_jはZvとの積がリターンの
    次元を持つので100倍にする。beta、rho、lamは無次元で変わらない。

    Args:
        params (SvcjParams): パーセント単位のパラメーター

    Returns:
        SvcjParams: 小数単位のパラメーター
    """
    return replace(
        params,
        mu=params.mu / PERCENT_FACTOR,
        mu_y=params.mu_y / PERCENT_FACTOR,
        sigma_y=params.sigma_y / PERCENT_FACTOR,
        alpha=params.alpha / VARIANCE_FACTOR,
        sigma_v=params.sigma_v / PERCENT_FACTOR,
        rho_j=params.rho_j * PERCENT_FACTOR,
        mu_v=params.mu_v / VARIANCE_FACTOR,
    )


def variance_to_decimal(variance: float) -> float:
    """パーセント単位の分散を小数単位に変換する。

    Args:
        variance (float): パーセント単位の分散

    Returns:
        float: 小数単位の分散
    """
    return variance / VARIANCE_FACTOR


def br_returns_to_decimal(log_returns: np.ndarray) -> np.ndarray:
    """パーセント単位のBRリターンを小数単位に変換する。

    BRパラメーターはパーセント単位のリターンで推定されたものとして扱い、
    パラメーター自体は変換せずにシミュレーションしたリターンを変換する。

    Args:
        log_returns (np.ndarray): パーセント単位の対数リターン

    Returns:
        np.ndarray: 小数単位の対数リターン
    """
    return log_returns / PERCENT_FACTOR


def br_sigma0(params: BrParams, fallback: float) -> float:
    """対数分散の長期平均から初期スポット・ボラティリティを求める。

    Args:
        params (BrParams): パラメーター
        fallback (float): 長期平均が存在しない場合のスポット・ボラティリティ

    Returns:
        float: 初期スポット・ボラティリティ
    """
    level = params.long_run_log_variance()
    if math.isnan(level):
        return fallback
    return math.exp(0.5 * level)
