import logging
import math
from typing import Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter
from scipy.stats import chi2

from jumpvol.common import RngStream
from jumpvol.common.errors import DegenerateInputError, InvalidInputError
from jumpvol.domain.models.baselines import ArimaParams, FitReport
from jumpvol.utils.likelihood import sandwich_covariance

logger = logging.getLogger(__name__)

# 観測数が次数の何倍以上必要か
OBSERVATIONS_PER_ORDER = 10

# シミュレーションで捨てる初期の観測数
SIMULATION_BURN_IN = 500


def arma_residuals(
    x: np.ndarray, c: float, a: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """条件付き残差を計算する。

    最初のp個の観測を条件とし、それ以前の残差を0として
    e_t = x_t - c - sum(a_i * x_{t-i}) - sum(b_j * e_{t-j}) を求める。

    Args:
        x (np.ndarray): 系列
        c (float): 切片
        a (np.ndarray): AR係数
        b (np.ndarray): MA係数

    Returns:
        np.ndarray: 長さ len(x) - p の残差
    """
    p = len(a)
    n = len(x)
    w = x[p:] - c
    for i, coefficient in enumerate(a, start=1):
        w = w - coefficient * x[p - i : n - i]
    return lfilter([1.0], np.concatenate(([1.0], b)), w)


def _split(theta: np.ndarray, p: int, q: int) -> Tuple[float, np.ndarray, np.ndarray]:
    return float(theta[0]), theta[1 : 1 + p], theta[1 + p : 1 + p + q]


def fit_arima(
    returns: np.ndarray, p: int, q: int
) -> Tuple[ArimaParams, FitReport]:
    """条件付き二乗和 (CSS) でARMA(p, q)を推定する。

    イノベーションを正規分布として、分散を集約した条件付き対数尤度を
    BFGS法で最大化する。標準誤差はロバスト (サンドイッチ) 標準誤差とする。

    Args:
        returns (np.ndarray): リターン
        p (int): AR次数
        q (int): MA次数

    Raises:
        InvalidInputError: 次数が負です。
        InvalidInputError: 次数に対して観測数が少なすぎます。
        DegenerateInputError: リターンの分散が0です。

    Returns:
        Tuple[ArimaParams, FitReport]: 推定値と推定の結果
    """
    if p < 0 or q < 0:
        raise InvalidInputError("次数が負です。")
    x = np.asarray(returns, dtype=float)
    if not len(x) > OBSERVATIONS_PER_ORDER * (p + q) or len(x) <= p + 1:
        raise InvalidInputError("次数に対して観測数が少なすぎます。")
    if not np.std(x) > 0:
        raise DegenerateInputError("リターンの分散が0です。")

    def css(theta: np.ndarray) -> float:
        c, a, b = _split(theta, p, q)
        with np.errstate(all="ignore"):
            value = float(np.mean(arma_residuals(x, c, a, b) ** 2))
        return value if math.isfinite(value) else 1e10

    start = np.concatenate(([float(np.mean(x))], np.zeros(p + q)))
    result = minimize(css, start, method="BFGS", options={"gtol": 1e-10})
    coefficients = np.asarray(result.x)
    c, a, b = _split(coefficients, p, q)
    residuals = arma_residuals(x, c, a, b)
    sigma2 = float(np.mean(residuals**2))

    def terms(theta: np.ndarray) -> np.ndarray:
        c, a, b = _split(theta, p, q)
        variance = theta[-1]
        e = arma_residuals(x, c, a, b)
        with np.errstate(all="ignore"):
            return -0.5 * (np.log(2.0 * math.pi * variance) + e**2 / variance)

    theta = np.concatenate((coefficients, [sigma2]))
    covariance = sandwich_covariance(terms, theta)
    names = (
        ["c"]
        + [f"a{i}" for i in range(1, p + 1)]
        + [f"b{j}" for j in range(1, q + 1)]
        + ["sigma2"]
    )
    std_errors = np.sqrt(np.abs(np.diag(covariance)))

    params = ArimaParams(c=c, a=np.array(a), b=np.array(b), sigma2=sigma2)
    if not params.is_invertible():
        logger.warning("推定したMA多項式が反転可能ではありません。")
    loglik = float(np.sum(terms(theta)))
    report = FitReport(
        estimates={n: float(v) for n, v in zip(names, theta)},
        std_errors={n: float(v) for n, v in zip(names, std_errors)},
        loglik=loglik,
        nobs=len(residuals),
        converged=bool(result.success),
        residuals=residuals,
    )
    logger.info("ARMA(%d, %d)を推定しました (loglik=%.4f)。", p, q, loglik)
    return params, report


def arma_forecast(params: ArimaParams, x: np.ndarray, steps: int = 1) -> np.ndarray:
    """ARMAモデルでsteps期先までの予測値を求める。

    将来のイノベーションは0とし、過去の残差は条件付き残差を用いる。

    Args:
        params (ArimaParams): パラメーター
        x (np.ndarray): 観測した系列
        steps (int): 予測する期数

    Raises:
        InvalidInputError: 観測数がAR次数以下です。

    Returns:
        np.ndarray: 予測値
    """
    x = np.asarray(x, dtype=float)
    if len(x) <= params.p:
        raise InvalidInputError("観測数がAR次数以下です。")
    residuals = list(arma_residuals(x, params.c, params.a, params.b))
    history = list(x)
    forecasts = []
    for _ in range(steps):
        value = params.c
        value += sum(a * history[-i] for i, a in enumerate(params.a, start=1))
        value += sum(
            b * residuals[-j]
            for j, b in enumerate(params.b, start=1)
            if j <= len(residuals)
        )
        forecasts.append(value)
        history.append(value)
        residuals.append(0.0)
    return np.array(forecasts)


def simulate_arma(params: ArimaParams, horizon: int, rng: RngStream) -> np.ndarray:
    """正規イノベーションのARMAモデルに従う系列をシミュレーションする。

    Args:
        params (ArimaParams): パラメーター (定常であること)
        horizon (int): 観測数
        rng (RngStream): 乱数ストリーム

    Returns:
        np.ndarray: 系列
    """
    gen = rng.generator()
    e = math.sqrt(params.sigma2) * gen.standard_normal(horizon + SIMULATION_BURN_IN)
    deviations = lfilter(
        np.concatenate(([1.0], params.b)), np.concatenate(([1.0], -params.a)), e
    )
    mean = params.c / (1.0 - float(np.sum(params.a)))
    return mean + deviations[SIMULATION_BURN_IN:]


def ljung_box(residuals: np.ndarray, lags: int) -> Tuple[float, float]:
    """Ljung-Box検定の統計量とp値を返す。

    Q = n(n + 2) * sum(r_k^2 / (n - k)) を自由度lagsのカイ二乗分布と比べる。

    Args:
        residuals (np.ndarray): 残差
        lags (int): ラグ数

    Raises:
        InvalidInputError: ラグ数が1以上、観測数の1/4未満ではありません。
        DegenerateInputError: 残差の分散が0です。

    Returns:
        Tuple[float, float]: 統計量とp値
    """
    x = np.asarray(residuals, dtype=float)
    n = len(x)
    if not 1 <= lags < n / 4:
        raise InvalidInputError("ラグ数が1以上、観測数の1/4未満ではありません。")
    centered = x - x.mean()
    denominator = float(np.sum(centered**2))
    if not denominator > 0:
        raise DegenerateInputError("残差の分散が0です。")
    statistic = 0.0
    for k in range(1, lags + 1):
        r = float(np.sum(centered[k:] * centered[:-k])) / denominator
        statistic += r**2 / (n - k)
    statistic *= n * (n + 2)
    return statistic, float(chi2.sf(statistic, lags))
