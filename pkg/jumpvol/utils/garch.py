"""Student-t分布に従うGARCH(1,1)とEGARCH(1,1)の最尤推定

イノベーションは分散1に標準化したt分布に従うものとする。推定はリターンを
標本標準偏差で割った系列に対して行い、推定値と共分散行列を元の尺度に戻す。
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats
from scipy.integrate import quad
from scipy.optimize import OptimizeResult, minimize
from scipy.signal import lfilter
from scipy.special import gammaln

from jumpvol.common import RngStream
from jumpvol.common.errors import DegenerateInputError
from jumpvol.domain.models.baselines import FitReport, TEgarchParams, TGarchParams
from jumpvol.utils.likelihood import sandwich_covariance

logger = logging.getLogger(__name__)

# 推定に推奨する観測数
MIN_RECOMMENDED_OBSERVATIONS = 500

# 自由度の探索範囲
NU_BOUNDS: Tuple[float, float] = (2.05, 500.0)

# alpha1 + beta1 < 1 を満たすための余裕
STATIONARITY_MARGIN = 1e-6

# 境界にあるとみなす距離
BOUNDARY_TOLERANCE = 1e-4

# 許容できないパラメーターに与える目的関数の値
PENALTY = 1e10

TGARCH_NAMES: List[str] = ["mu", "omega", "alpha1", "beta1", "nu"]
TEGARCH_NAMES: List[str] = ["mu", "omega", "alpha1", "beta1", "phi1", "nu"]


def standardized_t_logpdf(z: np.ndarray, nu: float) -> np.ndarray:
    """分散1に標準化したt分布の対数密度を返す。

    Args:
        z (np.ndarray): 標準化したイノベーション
        nu (float): 自由度

    Returns:
        np.ndarray: 対数密度
    """
    constant = (
        gammaln(0.5 * (nu + 1.0))
        - gammaln(0.5 * nu)
        - 0.5 * math.log(math.pi * (nu - 2.0))
    )
    return constant - 0.5 * (nu + 1.0) * np.log1p(z**2 / (nu - 2.0))


def expected_abs_t(nu: float) -> float:
    """分散1に標準化したt分布に従うZの E|Z| を返す。

    Args:
        nu (float): 自由度 (2より大きい)

    Returns:
        float: sqrt(nu - 2) * Gamma((nu - 1) / 2) / (sqrt(pi) * Gamma(nu / 2))
    """
    return math.sqrt(nu - 2.0) * math.exp(
        gammaln(0.5 * (nu - 1.0)) - gammaln(0.5 * nu) - 0.5 * math.log(math.pi)
    )


def expected_abs_t_quad(nu: float) -> float:
    """E|Z| を数値積分で求める。

    Args:
        nu (float): 自由度

    Returns:
        float: 2 * (0から無限大までの z * f(z) の積分)
    """
    scale = math.sqrt((nu - 2.0) / nu)
    value, _ = quad(
        lambda z: z * stats.t.pdf(z / scale, nu) / scale,
        0.0,
        np.inf,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    return 2.0 * value


def garch_filter(
    params: TGarchParams, innovations: np.ndarray, initial: Optional[float] = None
) -> np.ndarray:
    """GARCH(1,1)の条件付き分散を計算する。

    sigma2_t = omega + alpha1 * e_{t-1}^2 + beta1 * sigma2_{t-1} を左から順に適用する。

    Args:
        params (TGarchParams): パラメーター
        innovations (np.ndarray): 平均を除いたイノベーション e_t
        initial (Optional[float]): sigma2_0 (Noneの場合は無条件分散)

    Returns:
        np.ndarray: e_tと同じ長さの条件付き分散
    """
    return _garch_variance(
        params.omega,
        params.alpha1,
        params.beta1,
        np.asarray(innovations, dtype=float),
        params.unconditional_variance() if initial is None else initial,
    )


def _garch_variance(
    omega: float, alpha: float, beta: float, e: np.ndarray, initial: float
) -> np.ndarray:
    variance = np.empty(len(e))
    variance[0] = initial
    if len(e) > 1:
        drive = omega + alpha * e[:-1] ** 2
        variance[1:] = lfilter([1.0], [1.0, -beta], drive, zi=[beta * initial])[0]
    return variance


def egarch_filter(
    params: TEgarchParams,
    innovations: np.ndarray,
    initial_log_variance: Optional[float] = None,
) -> np.ndarray:
    """EGARCH(1,1)の条件付き分散を計算する。

    log sigma2_t = omega + beta1 * log sigma2_{t-1} + alpha1 * Z_{t-1}
    + phi1 * (|Z_{t-1}| - E|Z|) を左から順に適用する。

    Args:
        params (TEgarchParams): パラメーター
        innovations (np.ndarray): 平均を除いたイノベーション e_t
        initial_log_variance (Optional[float]): log sigma2_0 (Noneの場合は無条件平均)

    Returns:
        np.ndarray: e_tと同じ長さの条件付き分散
    """
    initial = (
        params.unconditional_log_variance()
        if initial_log_variance is None
        else initial_log_variance
    )
    return np.exp(
        _egarch_log_variance(
            params.omega,
            params.alpha1,
            params.beta1,
            params.phi1,
            expected_abs_t(params.nu),
            np.asarray(innovations, dtype=float),
            initial,
        )
    )


def _egarch_log_variance(
    omega: float,
    alpha: float,
    beta: float,
    phi: float,
    mean_abs: float,
    e: np.ndarray,
    initial: float,
) -> np.ndarray:
    log_variance = np.empty(len(e))
    log_variance[0] = initial
    for t in range(1, len(e)):
        z = e[t - 1] * np.exp(-0.5 * log_variance[t - 1])
        log_variance[t] = (
            omega
            + beta * log_variance[t - 1]
            + alpha * z
            + phi * (abs(z) - mean_abs)
        )
    return log_variance


def _tgarch_path(theta: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mu, omega, alpha, beta, _ = theta
    e = x - mu
    persistence = 1.0 - alpha - beta
    initial = omega / persistence if persistence > 0 else float(np.mean(e**2))
    return e, _garch_variance(omega, alpha, beta, e, initial)


def _tgarch_terms(theta: np.ndarray, x: np.ndarray) -> np.ndarray:
    nu = theta[4]
    e, variance = _tgarch_path(theta, x)
    with np.errstate(all="ignore"):
        z = e / np.sqrt(variance)
        return standardized_t_logpdf(z, nu) - 0.5 * np.log(variance)


def _tegarch_terms(theta: np.ndarray, x: np.ndarray) -> np.ndarray:
    mu, omega, alpha, beta, phi, nu = theta
    e = x - mu
    initial = omega / (1.0 - beta) if abs(beta) < 1 else 0.0
    with np.errstate(all="ignore"):
        log_variance = _egarch_log_variance(
            omega, alpha, beta, phi, expected_abs_t(nu), e, initial
        )
        z = e * np.exp(-0.5 * log_variance)
        return standardized_t_logpdf(z, nu) - 0.5 * log_variance


def _nu_at_boundary(nu: float) -> bool:
    low, high = NU_BOUNDS
    return not low + BOUNDARY_TOLERANCE < nu < high - BOUNDARY_TOLERANCE


def _prepare(returns: np.ndarray) -> Tuple[np.ndarray, float]:
    """リターンを検証し、標本標準偏差で割った系列と尺度を返す。"""
    x = np.asarray(returns, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DegenerateInputError("リターンに有限でない値が含まれています。")
    scale = float(np.std(x))
    if len(x) < 2 or not scale > 0:
        raise DegenerateInputError("リターンの分散が0です。")
    if len(x) < MIN_RECOMMENDED_OBSERVATIONS:
        logger.warning("観測数が少なすぎます (n=%d)。", len(x))
    return x / scale, scale


def _maximize(
    terms: Callable[[np.ndarray], np.ndarray],
    start: np.ndarray,
    bounds: List[Tuple[Optional[float], Optional[float]]],
    constraints: Tuple = (),
) -> OptimizeResult:
    """観測ごとの対数尤度の平均を最大化する。"""

    def objective(theta: np.ndarray) -> float:
        value = -float(np.mean(terms(theta)))
        return value if math.isfinite(value) else PENALTY

    return minimize(
        objective,
        start,
        method="SLSQP",
        bounds=bounds,
        constraints=constraints,
        options={"maxiter": 500, "ftol": 1e-10},
    )


def _report(
    names: List[str],
    estimates: np.ndarray,
    covariance: np.ndarray,
    loglik: float,
    nobs: int,
    converged: bool,
    at_boundary: bool,
    residuals: np.ndarray,
) -> FitReport:
    std_errors = np.sqrt(np.abs(np.diag(covariance)))
    return FitReport(
        estimates={n: float(v) for n, v in zip(names, estimates)},
        std_errors={n: float(v) for n, v in zip(names, std_errors)},
        loglik=loglik,
        nobs=nobs,
        converged=converged,
        at_boundary=at_boundary,
        residuals=residuals,
    )


def fit_tgarch(returns: np.ndarray) -> Tuple[TGarchParams, FitReport]:
    """t-GARCH(1,1)を最尤推定する。

    平均は定数とし、alpha1 + beta1 < 1 を制約として課す。

    Args:
        returns (np.ndarray): リターン

    Raises:
        DegenerateInputError: リターンの分散が0です。

    Returns:
        Tuple[TGarchParams, FitReport]: 推定値と推定の結果
    """
    x, scale = _prepare(returns)

    def terms(theta: np.ndarray) -> np.ndarray:
        return _tgarch_terms(theta, x)

    start = np.array([float(np.mean(x)), 0.05, 0.1, 0.85, 8.0])
    bounds = [(None, None), (1e-8, None), (0.0, 1.0), (0.0, 1.0), NU_BOUNDS]
    stationarity = {
        "type": "ineq",
        "fun": lambda theta: 1.0 - STATIONARITY_MARGIN - theta[2] - theta[3],
    }
    result = _maximize(terms, start, bounds, (stationarity,))
    theta = np.asarray(result.x)
    mu, omega, alpha, beta, nu = theta
    at_boundary = bool(
        alpha + beta > 1.0 - BOUNDARY_TOLERANCE
        or alpha < BOUNDARY_TOLERANCE
        or beta < BOUNDARY_TOLERANCE
        or _nu_at_boundary(nu)
    )
    if at_boundary:
        logger.warning("t-GARCHの推定値が制約の境界にあります。")

    # 元の尺度: mu -> mu * s, omega -> omega * s^2
    jacobian = np.diag([scale, scale**2, 1.0, 1.0, 1.0])
    covariance = jacobian @ sandwich_covariance(terms, theta) @ jacobian.T
    params = TGarchParams(
        omega=omega * scale**2,
        alpha1=alpha,
        beta1=beta,
        nu=nu,
        mu=mu * scale,
    )
    loglik = float(np.sum(terms(theta))) - len(x) * math.log(scale)
    e, variance = _tgarch_path(theta, x)
    residuals = e / np.sqrt(variance)
    report = _report(
        TGARCH_NAMES,
        np.array([params.mu, params.omega, alpha, beta, nu]),
        covariance,
        loglik,
        len(x),
        bool(result.success),
        at_boundary,
        residuals,
    )
    logger.info("t-GARCH(1,1)を推定しました (loglik=%.4f)。", loglik)
    return params, report


def fit_tegarch(returns: np.ndarray) -> Tuple[TEgarchParams, FitReport]:
    """t-EGARCH(1,1)を最尤推定する。

    Args:
        returns (np.ndarray): リターン

    Raises:
        DegenerateInputError: リターンの分散が0です。

    Returns:
        Tuple[TEgarchParams, FitReport]: 推定値と推定の結果
    """
    x, scale = _prepare(returns)

    def terms(theta: np.ndarray) -> np.ndarray:
        return _tegarch_terms(theta, x)

    start = np.array([float(np.mean(x)), 0.0, 0.0, 0.9, 0.2, 8.0])
    bounds = [
        (None, None),
        (None, None),
        (None, None),
        (-0.9999, 0.9999),
        (None, None),
        NU_BOUNDS,
    ]
    result = _maximize(terms, start, bounds)
    theta = np.asarray(result.x)
    mu, omega, alpha, beta, phi, nu = theta
    at_boundary = bool(
        abs(beta) > 0.9999 - BOUNDARY_TOLERANCE
        or _nu_at_boundary(nu)
    )
    if at_boundary:
        logger.warning("t-EGARCHの推定値が制約の境界にあります。")

    # 元の尺度: log sigma2 -> log sigma2 + 2 log s なので
    # omega -> omega + 2 log s * (1 - beta1)
    shift = 2.0 * math.log(scale)
    jacobian = np.eye(len(theta))
    jacobian[0, 0] = scale
    jacobian[1, 3] = -shift
    covariance = jacobian @ sandwich_covariance(terms, theta) @ jacobian.T
    params = TEgarchParams(
        omega=omega + shift * (1.0 - beta),
        alpha1=alpha,
        beta1=beta,
        phi1=phi,
        nu=nu,
        mu=mu * scale,
    )
    loglik = float(np.sum(terms(theta))) - len(x) * math.log(scale)
    log_variance = _egarch_log_variance(
        omega, alpha, beta, phi, expected_abs_t(nu), x - mu, omega / (1.0 - beta)
    )
    residuals = (x - mu) * np.exp(-0.5 * log_variance)
    report = _report(
        TEGARCH_NAMES,
        np.array([params.mu, params.omega, alpha, beta, phi, nu]),
        covariance,
        loglik,
        len(x),
        bool(result.success),
        at_boundary,
        residuals,
    )
    logger.info("t-EGARCH(1,1)を推定しました (loglik=%.4f)。", loglik)
    return params, report


def tgarch_loglik(params: TGarchParams, returns: np.ndarray) -> float:
    """t-GARCH(1,1)の対数尤度を返す。

    Args:
        params (TGarchParams): パラメーター
        returns (np.ndarray): リターン

    Returns:
        float: 対数尤度
    """
    theta = np.array(
        [params.mu, params.omega, params.alpha1, params.beta1, params.nu]
    )
    return float(np.sum(_tgarch_terms(theta, np.asarray(returns, dtype=float))))


def _standardized_t(gen: np.random.Generator, nu: float, size: int) -> np.ndarray:
    return gen.standard_t(nu, size) * math.sqrt((nu - 2.0) / nu)


def simulate_tgarch(params: TGarchParams, horizon: int, rng: RngStream) -> np.ndarray:
    """t-GARCH(1,1)に従うリターンをシミュレーションする。

    Args:
        params (TGarchParams): パラメーター
        horizon (int): 観測数
        rng (RngStream): 乱数ストリーム

    Returns:
        np.ndarray: リターン
    """
    z = _standardized_t(rng.generator(), params.nu, horizon)
    e = np.empty(horizon)
    variance = params.unconditional_variance()
    for t in range(horizon):
        e[t] = math.sqrt(variance) * z[t]
        variance = params.omega + params.alpha1 * e[t] ** 2 + params.beta1 * variance
    return params.mu + e


def simulate_tegarch(
    params: TEgarchParams, horizon: int, rng: RngStream
) -> np.ndarray:
    """t-EGARCH(1,1)に従うリターンをシミュレーションする。

    Args:
        params (TEgarchParams): パラメーター
        horizon (int): 観測数
        rng (RngStream): 乱数ストリーム

    Returns:
        np.ndarray: リターン
    """
    z = _standardized_t(rng.generator(), params.nu, horizon)
    mean_abs = expected_abs_t(params.nu)
    log_variance = params.unconditional_log_variance()
    e = np.empty(horizon)
    for t in range(horizon):
        e[t] = math.exp(0.5 * log_variance) * z[t]
        log_variance = (
            params.omega
            + params.beta1 * log_variance
            + params.alpha1 * z[t]
            + params.phi1 * (abs(z[t]) - mean_abs)
        )
    return params.mu + e


def params_from_report(report: FitReport) -> Dict[str, float]:
    """推定の結果から推定値と標準誤差を平坦な辞書にまとめる。

    Args:
        report (FitReport): 推定の結果

    Returns:
        Dict[str, float]: 推定値、標準誤差 (接尾辞_se)、情報量規準
    """
    values = dict(report.estimates)
    values.update({f"{name}_se": v for name, v in report.std_errors.items()})
    values.update(
        {
            "loglik": report.loglik,
            "aic": report.aic,
            "bic": report.bic,
            "nobs": report.nobs,
        }
    )
    return values
