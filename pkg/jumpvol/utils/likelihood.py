import logging
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

# 数値微分の相対的な刻み幅
RELATIVE_STEP = 1e-5

LoglikTerms = Callable[[np.ndarray], np.ndarray]


def _steps(theta: np.ndarray) -> np.ndarray:
    return RELATIVE_STEP * np.maximum(np.abs(theta), 1.0)


def numerical_scores(terms: LoglikTerms, theta: np.ndarray) -> np.ndarray:
    """観測ごとの対数尤度の勾配を中心差分で求める。

    Args:
        terms (LoglikTerms): パラメーターから観測ごとの対数尤度を返す関数
        theta (np.ndarray): パラメーター

    Returns:
        np.ndarray: スコア (観測数, パラメーター数)
    """
    h = _steps(theta)
    columns = []
    for i in range(len(theta)):
        shift = np.zeros_like(theta)
        shift[i] = h[i]
        columns.append((terms(theta + shift) - terms(theta - shift)) / (2.0 * h[i]))
    return np.column_stack(columns)


def numerical_hessian(terms: LoglikTerms, theta: np.ndarray) -> np.ndarray:
    """対数尤度のヘッセ行列を中心差分で求める。

    Args:
        terms (LoglikTerms): パラメーターから観測ごとの対数尤度を返す関数
        theta (np.ndarray): パラメーター

    Returns:
        np.ndarray: ヘッセ行列
    """
    h = _steps(theta)
    k = len(theta)
    hessian = np.empty((k, k))

    def total(x: np.ndarray) -> float:
        return float(np.sum(terms(x)))

    for i in range(k):
        for j in range(i, k):
            ei = np.zeros(k)
            ej = np.zeros(k)
            ei[i] = h[i]
            ej[j] = h[j]
            value = (
                total(theta + ei + ej)
                - total(theta + ei - ej)
                - total(theta - ei + ej)
                + total(theta - ei - ej)
            ) / (4.0 * h[i] * h[j])
            hessian[i, j] = hessian[j, i] = value
    return hessian


def sandwich_covariance(terms: LoglikTerms, theta: np.ndarray) -> np.ndarray:
    """擬似最尤推定量のロバストな共分散行列 H^-1 S'S H^-1 を求める。

    ヘッセ行列が特異な場合はnanの行列を返す。

    Args:
        terms (LoglikTerms): パラメーターから観測ごとの対数尤度を返す関数
        theta (np.ndarray): 推定値

    Returns:
        np.ndarray: 共分散行列
    """
    theta = np.asarray(theta, dtype=float)
    scores = numerical_scores(terms, theta)
    hessian = numerical_hessian(terms, theta)
    try:
        inverse = np.linalg.inv(hessian)
    except np.linalg.LinAlgError:
        logger.warning("ヘッセ行列が特異なため標準誤差を計算できません。")
        return np.full((len(theta), len(theta)), np.nan)
    return inverse @ (scores.T @ scores) @ inverse
