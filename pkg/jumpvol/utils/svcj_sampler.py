"""SV、SVJ、SVCJモデルのギブス・サンプラー

1反復で次のブロックを順に更新する。

1. 共役な正規分布からmu、(alpha, beta)をサンプリングする。
2. 独立メトロポリス・ヘイスティングスでsigma_v^2を更新する。
3. ランダムウォーク・メトロポリス・ヘイスティングスでrhoを更新する。
4. 共役な分布からジャンプのパラメーター (mu_y、sigma_y^2、rho_j、mu_v、lam) をサンプリングする。
5. ジャンプの有無J_tとジャンプサイズ (Zy_t、Zv_t) をサンプリングする。
6. 対数分散のランダムウォークで分散V_tを更新する。偶数番目と奇数番目の日を交互に
   まとめて更新するが、受理判定は日ごとに行う。

ランダムウォークの提案幅はバーンイン中だけRobbins-Monro法で適応させる。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg, stats
from scipy.special import expit

from jumpvol.common.errors import InitializationError, InvalidInputError
from jumpvol.domain.models.mcmc import (
    McmcConfig,
    PosteriorChain,
    PosteriorSummary,
    PriorSpec,
)
from jumpvol.domain.models.series import ReturnSeries, Units, rescale
from jumpvol.domain.models.svcj import SVCJ_PARAMETER_NAMES, LatentPath, ModelFlavor
from jumpvol.utils.diagnostics import detect_jumps, mse

logger = logging.getLogger(__name__)

# 推奨する観測数の下限
MIN_RECOMMENDED_OBSERVATIONS = 100

# 分散の初期値に用いる移動窓の長さ
ROLLING_WINDOW = 20

# 分散の初期値の下限
VARIANCE_FLOOR = 1e-6

# ランダムウォークの初期の提案幅
INITIAL_RHO_SCALE = 0.05
INITIAL_LOG_V_SCALE = 0.5

# Robbins-Monro法の学習率の減衰指数
ADAPTATION_DECAY = 0.6

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass
class SamplerState:
    """ギブス・サンプラーの状態 (パラメーターと潜在変数)"""

    mu: float
    alpha: float
    beta: float
    sigma_v2: float
    rho: float
    mu_y: float
    sigma_y2: float
    rho_j: float
    mu_v: float
    lam: float
    # 分散 (T + 1)
    V: np.ndarray
    # ジャンプの有無 (T)
    J: np.ndarray
    # リターンジャンプのサイズ (T)
    Zy: np.ndarray
    # 分散ジャンプのサイズ (T)
    Zv: np.ndarray

    def as_row(self) -> List[float]:
        """パラメーターをSVCJ_PARAMETER_NAMESの順に返す。

        Returns:
            List[float]: パラメーター
        """
        values = {
            "mu": self.mu,
            "mu_y": self.mu_y,
            "sigma_y": math.sqrt(self.sigma_y2),
            "lam": self.lam,
            "alpha": self.alpha,
            "beta": self.beta,
            "rho": self.rho,
            "sigma_v": math.sqrt(self.sigma_v2),
            "rho_j": self.rho_j,
            "mu_v": self.mu_v,
        }
        return [values[name] for name in SVCJ_PARAMETER_NAMES]

    def latent(self) -> LatentPath:
        """潜在変数の複製を返す。

        Returns:
            LatentPath: 潜在変数
        """
        return LatentPath(self.V, self.J, self.Zy, self.Zv)

    def diagnostics(self) -> Dict[str, object]:
        """診断用の状態を返す。

        Returns:
            Dict[str, object]: パラメーターと潜在変数の要約
        """
        values: Dict[str, object] = dict(zip(SVCJ_PARAMETER_NAMES, self.as_row()))
        values["V_min"] = float(np.min(self.V))
        values["V_max"] = float(np.max(self.V))
        values["jumps"] = int(np.sum(self.J))
        return values


def _residuals(
    y: np.ndarray,
    state: SamplerState,
    V: Optional[np.ndarray] = None,
    J: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """前日の分散と、リターンおよび分散の拡散部分の残差を返す。"""
    V = state.V if V is None else V
    J = state.J if J is None else J
    vp = V[:-1]
    e_y = y - state.mu - J * state.Zy
    e_v = V[1:] - state.alpha - state.beta * vp - J * state.Zv
    return vp, e_y, e_v


def _bivariate_loglik(
    vp: np.ndarray, e_y: np.ndarray, e_v: np.ndarray, sigma_v2: float, rho: float
) -> np.ndarray:
    one_minus = 1.0 - rho**2
    quad = (
        e_y**2 - 2.0 * rho * e_y * e_v / math.sqrt(sigma_v2) + e_v**2 / sigma_v2
    ) / (one_minus * vp)
    return (
        -_LOG_2PI
        - np.log(vp)
        - 0.5 * math.log(sigma_v2)
        - 0.5 * math.log(one_minus)
        - 0.5 * quad
    )


def term_loglik(
    y: np.ndarray, state: SamplerState, V: Optional[np.ndarray] = None
) -> np.ndarray:
    """日ごとの (Y_t, V_t) | V_{t-1} の対数尤度を返す。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        V (Optional[np.ndarray]): 状態の分散の代わりに用いる分散

    Returns:
        np.ndarray: 長さTの対数尤度
    """
    vp, e_y, e_v = _residuals(y, state, V)
    return _bivariate_loglik(vp, e_y, e_v, state.sigma_v2, state.rho)


def sample_mu(
    y: np.ndarray, state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> float:
    """muを正規分布の完全条件付き分布からサンプリングする。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        float: mu
    """
    vp, e_y, e_v = _residuals(y, state)
    # e_yにmuを足し戻し、e_vで条件付けた回帰の従属変数を作る
    x = e_y + state.mu - state.rho * e_v / math.sqrt(state.sigma_v2)
    w = 1.0 / ((1.0 - state.rho**2) * vp)
    precision = 1.0 / priors.mu_var + w.sum()
    mean = (priors.mu_mean / priors.mu_var + (w * x).sum()) / precision
    return mean + gen.standard_normal() / math.sqrt(precision)


def sample_alpha_beta(
    y: np.ndarray, state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> Tuple[float, float]:
    """(alpha, beta)を2変量正規分布の完全条件付き分布からサンプリングする。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        Tuple[float, float]: alphaとbeta
    """
    vp, e_y, _ = _residuals(y, state)
    z = state.V[1:] - state.J * state.Zv - state.rho * math.sqrt(state.sigma_v2) * e_y
    X = np.column_stack((np.ones_like(vp), vp))
    w = 1.0 / (state.sigma_v2 * (1.0 - state.rho**2) * vp)
    prior_precision = np.eye(2) / priors.ab_var
    prior_mean = np.array([priors.alpha_mean, priors.beta_mean])
    precision = prior_precision + X.T @ (w[:, None] * X)
    rhs = prior_precision @ prior_mean + X.T @ (w * z)
    mean = np.linalg.solve(precision, rhs)
    chol = np.linalg.cholesky(precision)
    draw = mean + linalg.solve_triangular(
        chol, gen.standard_normal(2), trans="T", lower=True
    )
    return float(draw[0]), float(draw[1])


def sample_sigma_v2(
    y: np.ndarray, state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> Tuple[float, bool]:
    """sigma_v^2を独立メトロポリス・ヘイスティングスで更新する。

    提案分布は、rho = 0としたときの完全条件付き分布 (逆ガンマ分布) である。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        Tuple[float, bool]: sigma_v^2と受理したか
    """
    vp, _, e_v = _residuals(y, state)
    shape = priors.sigma_v2_shape + 0.5 * len(vp)
    scale = priors.sigma_v2_scale + 0.5 * np.sum(e_v**2 / vp)
    proposal = float(stats.invgamma.rvs(shape, scale=scale, random_state=gen))

    def log_target(value: float) -> float:
        prior = stats.invgamma.logpdf(
            value, priors.sigma_v2_shape, scale=priors.sigma_v2_scale
        )
        return prior + term_loglik(y, replace(state, sigma_v2=value)).sum()

    def log_proposal(value: float) -> float:
        return stats.invgamma.logpdf(value, shape, scale=scale)

    log_ratio = (
        log_target(proposal)
        - log_target(state.sigma_v2)
        - log_proposal(proposal)
        + log_proposal(state.sigma_v2)
    )
    if math.log(gen.random()) < log_ratio:
        return proposal, True
    return state.sigma_v2, False


def sample_rho(
    y: np.ndarray, state: SamplerState, scale: float, gen: np.random.Generator
) -> Tuple[float, bool]:
    """rhoをランダムウォーク・メトロポリス・ヘイスティングスで更新する。

    事前分布はU(-1, 1)で、区間外の提案は棄却する。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        scale (float): 提案幅
        gen (np.random.Generator): 乱数生成器

    Returns:
        Tuple[float, bool]: rhoと受理したか
    """
    proposal = state.rho + scale * gen.standard_normal()
    u = gen.random()
    if abs(proposal) >= 1.0:
        return state.rho, False
    log_ratio = (
        term_loglik(y, replace(state, rho=proposal)).sum() - term_loglik(y, state).sum()
    )
    if math.log(u) < log_ratio:
        return proposal, True
    return state.rho, False


def sample_mu_y(
    state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> float:
    """mu_yを正規分布の完全条件付き分布からサンプリングする。

    Args:
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        float: mu_y
    """
    precision = 1.0 / priors.mu_y_var + len(state.Zy) / state.sigma_y2
    total = np.sum(state.Zy - state.rho_j * state.Zv)
    mean = (priors.mu_y_mean / priors.mu_y_var + total / state.sigma_y2) / precision
    return mean + gen.standard_normal() / math.sqrt(precision)


def sample_sigma_y2(
    state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> float:
    """sigma_y^2を逆ガンマ分布の完全条件付き分布からサンプリングする。

    Args:
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        float: sigma_y^2
    """
    errors = state.Zy - state.mu_y - state.rho_j * state.Zv
    shape = priors.sigma_y2_shape + 0.5 * len(errors)
    scale = priors.sigma_y2_scale + 0.5 * np.sum(errors**2)
    return float(stats.invgamma.rvs(shape, scale=scale, random_state=gen))


def sample_rho_j(
    state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> float:
    """rho_jを正規分布の完全条件付き分布からサンプリングする。

    Args:
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        float: rho_j
    """
    precision = 1.0 / priors.rho_j_var + np.sum(state.Zv**2) / state.sigma_y2
    total = np.sum(state.Zv * (state.Zy - state.mu_y))
    mean = (priors.rho_j_mean / priors.rho_j_var + total / state.sigma_y2) / precision
    return mean + gen.standard_normal() / math.sqrt(precision)


def sample_mu_v(
    state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> float:
    """mu_vを逆ガンマ分布の完全条件付き分布からサンプリングする。

    Args:
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        float: mu_v
    """
    shape = priors.mu_v_shape + len(state.Zv)
    scale = priors.mu_v_scale + np.sum(state.Zv)
    return float(stats.invgamma.rvs(shape, scale=scale, random_state=gen))


def sample_lam(
    state: SamplerState, priors: PriorSpec, gen: np.random.Generator
) -> float:
    """ジャンプ強度をベータ分布の完全条件付き分布からサンプリングする。

    Args:
        state (SamplerState): 状態
        priors (PriorSpec): 事前分布
        gen (np.random.Generator): 乱数生成器

    Returns:
        float: ジャンプ強度
    """
    jumps = float(np.sum(state.J))
    return float(gen.beta(priors.lam_a + jumps, priors.lam_b + len(state.J) - jumps))


def sample_jumps(
    y: np.ndarray, state: SamplerState, gen: np.random.Generator
) -> np.ndarray:
    """ジャンプの有無をベルヌーイ分布の完全条件付き分布からサンプリングする。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        gen (np.random.Generator): 乱数生成器

    Returns:
        np.ndarray: ジャンプの有無
    """
    ones = np.ones_like(state.J)
    vp, e_y1, e_v1 = _residuals(y, state, J=ones)
    _, e_y0, e_v0 = _residuals(y, state, J=0 * ones)
    log_odds = (
        math.log(state.lam)
        - math.log1p(-state.lam)
        + _bivariate_loglik(vp, e_y1, e_v1, state.sigma_v2, state.rho)
        - _bivariate_loglik(vp, e_y0, e_v0, state.sigma_v2, state.rho)
    )
    return (gen.random(len(y)) < expit(log_odds)).astype(np.int8)


def sample_jump_sizes(
    y: np.ndarray,
    state: SamplerState,
    variance_jumps: bool,
    gen: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """ジャンプサイズをサンプリングする。

    ジャンプがない日は事前分布から、ジャンプがある日は、Zvを0で切断した正規分布、
    ZyをZvで条件付けた正規分布からサンプリングする。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        variance_jumps (bool): 分散ジャンプを含むか
        gen (np.random.Generator): 乱数生成器

    Returns:
        Tuple[np.ndarray, np.ndarray]: ZyとZv
    """
    horizon = len(y)
    sigma_y = math.sqrt(state.sigma_y2)
    if variance_jumps:
        zv = state.mu_v * gen.exponential(size=horizon)
    else:
        zv = np.zeros(horizon)
    zy = state.mu_y + state.rho_j * zv + sigma_y * gen.standard_normal(horizon)

    index = np.flatnonzero(state.J == 1)
    if len(index) == 0:
        return zy, zv
    vp = state.V[index]
    vc = state.V[index + 1]
    one_minus = 1.0 - state.rho**2
    sigma_v = math.sqrt(state.sigma_v2)
    drift = vc - state.alpha - state.beta * vp
    if variance_jumps:
        e_y = y[index] - state.mu - state.Zy[index]
        a = drift - state.rho * sigma_v * e_y
        s = state.sigma_v2 * one_minus * vp
        H = 1.0 / (1.0 / s + state.rho_j**2 / state.sigma_y2)
        h = H * (
            a / s
            + state.rho_j * (state.Zy[index] - state.mu_y) / state.sigma_y2
            - 1.0 / state.mu_v
        )
        sd = np.sqrt(H)
        zv[index] = stats.truncnorm.rvs(
            -h / sd, np.inf, loc=h, scale=sd, size=len(index), random_state=gen
        )
    m = one_minus * vp
    e_v = drift - zv[index]
    L = 1.0 / (1.0 / m + 1.0 / state.sigma_y2)
    level = L * (
        (y[index] - state.mu - state.rho * e_v / sigma_v) / m
        + (state.mu_y + state.rho_j * zv[index]) / state.sigma_y2
    )
    zy[index] = level + np.sqrt(L) * gen.standard_normal(len(index))
    return zy, zv


def sample_variance(
    y: np.ndarray,
    state: SamplerState,
    log_scales: np.ndarray,
    gen: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """分散を対数ランダムウォーク・メトロポリス・ヘイスティングスで日ごとに更新する。

    分散V_tが現れるのは第t項と第t+1項だけなので、偶数番目の日をまとめて更新し、
    続いて奇数番目の日をまとめて更新する。受理判定は日ごとに行う。

    Args:
        y (np.ndarray): リターン
        state (SamplerState): 状態
        log_scales (np.ndarray): 日ごとの提案幅の対数 (T + 1)
        gen (np.random.Generator): 乱数生成器

    Returns:
        Tuple[np.ndarray, np.ndarray]: 分散と日ごとに受理したか
    """
    V = state.V.copy()
    accepted = np.zeros(len(V), dtype=bool)
    for parity in (0, 1):
        index = np.arange(parity, len(V), 2)
        steps = np.exp(log_scales[index]) * gen.standard_normal(len(index))
        proposal = V.copy()
        proposal[index] = V[index] * np.exp(steps)
        diff = term_loglik(y, state, proposal) - term_loglik(y, state, V)
        # 第t項は前日の分散V_{t-1}と当日の分散V_tに依存する
        site = np.zeros(len(V))
        site[:-1] += diff
        site[1:] += diff
        # 対数変換のヤコビアンはlog(V') - log(V) = steps
        log_ratio = site[index] + steps
        accept = np.log(gen.random(len(index))) < log_ratio
        V[index[accept]] = proposal[index[accept]]
        accepted[index] = accept
    return V, accepted


def initial_state(
    y: np.ndarray, flavor: ModelFlavor, priors: PriorSpec
) -> SamplerState:
    """サンプラーの初期状態を返す。

    分散は20日移動分散 (下限1e-6)、ジャンプは0で初期化する。

    Args:
        y (np.ndarray): リターン
        flavor (ModelFlavor): モデルの種類
        priors (PriorSpec): 事前分布

    Returns:
        SamplerState: 初期状態
    """
    rolling = pd.Series(y).rolling(ROLLING_WINDOW, min_periods=2).var().bfill()
    rolling = rolling.fillna(float(np.var(y))).to_numpy()
    rolling = np.maximum(rolling, VARIANCE_FLOOR)
    V = np.concatenate(([rolling[0]], rolling))
    sigma_v2 = max(float(np.var(np.diff(V)) / np.mean(V)), VARIANCE_FLOOR)
    horizon = len(y)
    has_jumps = flavor.has_jumps
    has_variance_jumps = flavor.has_variance_jumps
    return SamplerState(
        mu=float(np.mean(y)),
        alpha=float(np.mean(V)),
        beta=0.0,
        sigma_v2=sigma_v2,
        rho=0.0,
        mu_y=0.0,
        sigma_y2=priors.sigma_y2_scale / (priors.sigma_y2_shape + 1.0)
        if has_jumps
        else 0.0,
        rho_j=0.0,
        mu_v=priors.mu_v_scale / (priors.mu_v_shape + 1.0)
        if has_variance_jumps
        else 0.0,
        lam=priors.lam_mean if has_jumps else 0.0,
        V=V,
        J=np.zeros(horizon, dtype=np.int8),
        Zy=np.zeros(horizon),
        Zv=np.zeros(horizon),
    )


def _adapt(
    log_scale: np.ndarray | float,
    accepted: np.ndarray | bool,
    target: float,
    iteration: int,
) -> np.ndarray:
    """Robbins-Monro法で提案幅の対数を目標採択率に近づける。"""
    gain = 1.0 / (iteration + 1.0) ** ADAPTATION_DECAY
    return log_scale + gain * (np.asarray(accepted, dtype=float) - target)


def fit_svcj(
    returns: ReturnSeries,
    flavor: ModelFlavor,
    priors: PriorSpec,
    cfg: McmcConfig,
) -> PosteriorChain:
    """SV、SVJ、SVCJモデルをMCMCで推定する。

    Args:
        returns (ReturnSeries): リターン系列 (パーセント単位に変換して用いる)
        flavor (ModelFlavor): モデルの種類
        priors (PriorSpec): 事前分布
        cfg (McmcConfig): MCMCの設定

    Raises:
        InvalidInputError: リターンが2つ未満または有限でない値を含みます。
        InitializationError: 初期状態の尤度が有限ではありません。

    Returns:
        PosteriorChain: パラメーターと潜在変数の連鎖
    """
    y = np.asarray(rescale(returns, Units.Percent).values, dtype=float)
    horizon = len(y)
    if horizon < 2 or not np.all(np.isfinite(y)):
        raise InvalidInputError("リターンが2つ未満または有限でない値を含みます。")
    if horizon < MIN_RECOMMENDED_OBSERVATIONS:
        logger.warning("観測数が少なすぎます (T=%d)。", horizon)

    state = initial_state(y, flavor, priors)
    if not np.isfinite(term_loglik(y, state).sum()):
        raise InitializationError(
            "初期状態の尤度が有限ではありません。", state.diagnostics()
        )

    gen = cfg.seed.generator()
    target = cfg.mh_target_accept
    rho_log_scale = math.log(INITIAL_RHO_SCALE)
    v_log_scales = np.full(horizon + 1, math.log(INITIAL_LOG_V_SCALE))
    accepted = {"rho": 0.0, "sigma_v2": 0.0, "V": 0.0}

    rows = np.empty((cfg.iterations, len(SVCJ_PARAMETER_NAMES)))
    latent_draws: List[Tuple[int, LatentPath]] = []
    jump_sum = np.zeros(horizon)
    variance_sum = np.zeros(horizon + 1)
    zy_sum = np.zeros(horizon)
    zv_sum = np.zeros(horizon)

    logger.info(
        "MCMCを開始します (flavor=%s, T=%d, iterations=%d, burn_in=%d)。",
        flavor.value,
        horizon,
        cfg.iterations,
        cfg.burn_in,
    )
    for i in range(cfg.iterations):
        burning = i < cfg.burn_in
        state.mu = sample_mu(y, state, priors, gen)
        state.alpha, state.beta = sample_alpha_beta(y, state, priors, gen)
        state.sigma_v2, sigma_v2_ok = sample_sigma_v2(y, state, priors, gen)
        state.rho, rho_ok = sample_rho(y, state, math.exp(rho_log_scale), gen)
        if flavor.has_jumps:
            state.mu_y = sample_mu_y(state, priors, gen)
            state.sigma_y2 = sample_sigma_y2(state, priors, gen)
            if flavor.has_variance_jumps:
                state.rho_j = sample_rho_j(state, priors, gen)
                state.mu_v = sample_mu_v(state, priors, gen)
            state.lam = sample_lam(state, priors, gen)
            state.J = sample_jumps(y, state, gen)
            state.Zy, state.Zv = sample_jump_sizes(
                y, state, flavor.has_variance_jumps, gen
            )
        state.V, v_ok = sample_variance(y, state, v_log_scales, gen)

        if burning:
            rho_log_scale = float(_adapt(rho_log_scale, rho_ok, target, i))
            v_log_scales = _adapt(v_log_scales, v_ok, target, i)
        else:
            accepted["rho"] += rho_ok
            accepted["sigma_v2"] += sigma_v2_ok
            accepted["V"] += float(np.mean(v_ok))
            jump_sum += state.J
            variance_sum += state.V
            zy_sum += state.J * state.Zy
            zv_sum += state.J * state.Zv
            if (i - cfg.burn_in) % cfg.latent_thin == 0:
                latent_draws.append((i, state.latent()))
        rows[i] = state.as_row()
        if (i + 1) % 1000 == 0:
            logger.debug("%d回目の反復を終了しました。", i + 1)

    kept = cfg.iterations - cfg.burn_in
    rates = {name: value / kept for name, value in accepted.items()}
    logger.info("MCMCを終了しました (acceptance=%s)。", rates)
    with np.errstate(invalid="ignore", divide="ignore"):
        zy_mean = np.where(jump_sum > 0, zy_sum / jump_sum, 0.0)
        zv_mean = np.where(jump_sum > 0, zv_sum / jump_sum, 0.0)
    return PosteriorChain(
        flavor=flavor,
        config=cfg,
        draws=pd.DataFrame(rows, columns=SVCJ_PARAMETER_NAMES),
        latent_draws=latent_draws,
        acceptance_rates=rates,
        jump_probability=jump_sum / kept,
        variance_mean=variance_sum / kept,
        jump_size_y_mean=zy_mean,
        jump_size_v_mean=zv_mean,
    )


def run_chains(
    returns: ReturnSeries,
    flavor: ModelFlavor,
    priors: PriorSpec,
    cfg: McmcConfig,
    chains: int,
    threads: int = 1,
) -> List[PosteriorChain]:
    """シードの異なる複数の連鎖を並列に実行する。

    連鎖iはcfg.seedのサブストリームiを用い、結果はサブストリーム番号の順に並ぶ。

    Args:
        returns (ReturnSeries): リターン系列
        flavor (ModelFlavor): モデルの種類
        priors (PriorSpec): 事前分布
        cfg (McmcConfig): MCMCの設定
        chains (int): 連鎖の数
        threads (int): スレッド数

    Returns:
        List[PosteriorChain]: 連鎖
    """
    configs = [replace(cfg, seed=cfg.seed.substream(i)) for i in range(chains)]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(
            executor.map(lambda c: fit_svcj(returns, flavor, priors, c), configs)
        )


def summarize(
    chains: Sequence[PosteriorChain], returns: Optional[ReturnSeries] = None
) -> PosteriorSummary:
    """連鎖のバーンイン後のサンプルを要約する。

    複数の連鎖は与えた順に結合する。リターン系列を与えた場合は平均二乗誤差も計算する。

    Args:
        chains (Sequence[PosteriorChain]): 連鎖
        returns (Optional[ReturnSeries]): 推定に用いたリターン系列

    Returns:
        PosteriorSummary: 事後分布の要約
    """
    draws = pd.concat([chain.posterior_draws() for chain in chains], ignore_index=True)
    jump_probability = np.mean([c.jump_probability for c in chains], axis=0)
    mean = {name: float(draws[name].mean()) for name in SVCJ_PARAMETER_NAMES}
    kappa = 1.0 - draws["beta"]
    summary = PosteriorSummary(
        mean=mean,
        std={name: float(draws[name].std()) for name in SVCJ_PARAMETER_NAMES},
        quantile_025={
            name: float(draws[name].quantile(0.025)) for name in SVCJ_PARAMETER_NAMES
        },
        quantile_975={
            name: float(draws[name].quantile(0.975)) for name in SVCJ_PARAMETER_NAMES
        },
        jump_probability=jump_probability,
        detected_jumps=detect_jumps(jump_probability, mean["lam"]),
        variance_path=np.mean([c.variance_mean for c in chains], axis=0),
        jump_size_y=np.mean([c.jump_size_y_mean for c in chains], axis=0),
        jump_size_v=np.mean([c.jump_size_v_mean for c in chains], axis=0),
        derived={
            "kappa": float(kappa.mean()),
            "theta": float((draws["alpha"] / kappa).mean()),
        },
    )
    if returns is not None:
        summary.mse = mse(returns, summary)
    return summary
