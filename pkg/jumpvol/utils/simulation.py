import logging
import math
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import ndtri

from jumpvol.common import RngStream
from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.br import BrParams
from jumpvol.domain.models.series import ReturnSeries, Units
from jumpvol.domain.models.svcj import LatentPath, ModelFlavor, SvcjParams

logger = logging.getLogger(__name__)

# SVCJの1ステップで消費する一様乱数の数
SVCJ_COLUMNS = 5

# BRの1ステップで消費する一様乱数の数
BR_COLUMNS = 9

# シミュレーションした系列の開始日
DEFAULT_START = date(2000, 1, 1)

# BRモデルの対数分散の範囲 (指数関数のオーバーフローを防ぐ)
DEFAULT_LOG_VARIANCE_BOUNDS: Tuple[float, float] = (-20.0, 20.0)

# 正規分位点関数に渡す一様乱数の下限
_UNIFORM_FLOOR = np.finfo(float).tiny


def draw_uniforms(
    streams: Sequence[RngStream], horizon: int, columns: int
) -> np.ndarray:
    """経路ごとの一様乱数を生成する。

    経路iはstreams[i]だけから乱数を取り出すため、先頭kステップの乱数は
    ホライズンにも経路数にも依存しない。

    Args:
        streams (Sequence[RngStream]): 経路ごとの乱数ストリーム
        horizon (int): ステップ数
        columns (int): 1ステップで消費する乱数の数

    Returns:
        np.ndarray: 形状 (経路数, ステップ数, columns) の一様乱数
    """
    uniforms = np.empty((len(streams), horizon, columns))
    for i, stream in enumerate(streams):
        uniforms[i] = stream.generator().random((horizon, columns))
    return uniforms


def normal_from_uniform(u: np.ndarray) -> np.ndarray:
    """一様乱数を標準正規乱数に変換する。

    Args:
        u (np.ndarray): [0, 1) の一様乱数

    Returns:
        np.ndarray: 標準正規乱数
    """
    return ndtri(np.maximum(u, _UNIFORM_FLOOR))


def exponential_from_uniform(u: np.ndarray) -> np.ndarray:
    """一様乱数を平均1の指数乱数に変換する。

    Args:
        u (np.ndarray): [0, 1) の一様乱数

    Returns:
        np.ndarray: 平均1の指数乱数
    """
    return -np.log1p(-u)


@dataclass(frozen=True)
class SvcjInnovations:
    """SVCJの1ステップの確率的な入力"""

    # リターンの拡散ショック
    eps_y: np.ndarray
    # 分散の拡散ショック (eps_yとの相関はrho)
    eps_v: np.ndarray
    # ジャンプの有無
    jump: np.ndarray
    # リターンジャンプのサイズ
    zy: np.ndarray
    # 分散ジャンプのサイズ
    zv: np.ndarray


def svcj_innovations(params: SvcjParams, u: np.ndarray) -> SvcjInnovations:
    """一様乱数からSVCJの1ステップの入力を構築する。

    uの最後の軸は (リターンの正規, 分散の正規, ジャンプサイズの正規,
    ジャンプ判定の一様, 分散ジャンプの指数) の順に並ぶ。

    Args:
        params (SvcjParams): パラメーター
        u (np.ndarray): 最後の軸の長さがSVCJ_COLUMNSの一様乱数

    Returns:
        SvcjInnovations: 1ステップの入力
    """
    eps_y = normal_from_uniform(u[..., 0])
    eps_v = params.rho * eps_y + math.sqrt(1.0 - params.rho**2) * normal_from_uniform(
        u[..., 1]
    )
    zv = params.mu_v * exponential_from_uniform(u[..., 4])
    jump_noise = normal_from_uniform(u[..., 2])
    zy = params.mu_y + params.rho_j * zv + params.sigma_y * jump_noise
    jump = (u[..., 3] < params.lam).astype(np.int8)
    return SvcjInnovations(eps_y, eps_v, jump, zy, zv)


def svcj_step(
    params: SvcjParams, v_prev: np.ndarray, innovations: SvcjInnovations
) -> Tuple[np.ndarray, np.ndarray]:
    """オイラー離散化の1ステップを進める。

    分散は完全切断で0以上に保つ。

    Args:
        params (SvcjParams): パラメーター
        v_prev (np.ndarray): 前日の分散
        innovations (SvcjInnovations): 1ステップの入力

    Returns:
        Tuple[np.ndarray, np.ndarray]: リターンと分散
    """
    sqrt_v = np.sqrt(np.maximum(v_prev, 0.0))
    y = params.mu + sqrt_v * innovations.eps_y + innovations.zy * innovations.jump
    v = (
        params.alpha
        + params.beta * v_prev
        + params.sigma_v * sqrt_v * innovations.eps_v
        + innovations.zv * innovations.jump
    )
    return y, np.maximum(v, 0.0)


@dataclass
class SvcjPaths:
    """SVCJの複数経路"""

    # リターン (経路数, T)
    returns: np.ndarray
    # 分散 (経路数, T + 1)
    variance: np.ndarray
    # ジャンプの有無 (経路数, T)
    jumps: np.ndarray
    # リターンジャンプのサイズ (経路数, T)
    zy: np.ndarray
    # 分散ジャンプのサイズ (経路数, T)
    zv: np.ndarray


def simulate_svcj_paths(
    params: SvcjParams,
    flavor: ModelFlavor,
    v0: float,
    horizon: int,
    streams: Sequence[RngStream],
    keep_latent: bool = True,
) -> SvcjPaths:
    """SVCJモデルの経路をまとめてシミュレーションする。

    経路iは、streams[i]を渡したsimulate_svcjの結果と一致する。

    Args:
        params (SvcjParams): パラメーター
        flavor (ModelFlavor): モデルの種類
        v0 (float): 初期分散
        horizon (int): 日数
        streams (Sequence[RngStream]): 経路ごとの乱数ストリーム
        keep_latent (bool): 潜在変数を保存するか

    Raises:
        InvalidInputError: 初期分散が負です。
        InvalidInputError: 日数が1未満です。

    Returns:
        SvcjPaths: 経路
    """
    if not v0 >= 0:
        raise InvalidInputError("初期分散が負です。")
    if horizon < 1:
        raise InvalidInputError("日数が1未満です。")
    restricted = params.restricted(flavor)
    uniforms = draw_uniforms(streams, horizon, SVCJ_COLUMNS)
    n = len(streams)
    returns = np.empty((n, horizon))
    variance = np.empty((n, horizon + 1))
    variance[:, 0] = v0
    shape = (n, horizon) if keep_latent else (0, 0)
    jumps = np.zeros(shape, dtype=np.int8)
    zy = np.zeros(shape)
    zv = np.zeros(shape)
    for t in range(horizon):
        innovations = svcj_innovations(restricted, uniforms[:, t, :])
        returns[:, t], variance[:, t + 1] = svcj_step(
            restricted, variance[:, t], innovations
        )
        if keep_latent:
            jumps[:, t] = innovations.jump
            zy[:, t] = innovations.zy
            zv[:, t] = innovations.zv
    return SvcjPaths(returns, variance, jumps, zy, zv)


def simulate_svcj(
    params: SvcjParams,
    flavor: ModelFlavor,
    v0: float,
    horizon: int,
    rng: RngStream,
    units: Units = Units.Percent,
    start: date = DEFAULT_START,
) -> Tuple[ReturnSeries, LatentPath]:
    """SVCJモデルのリターンと潜在変数をシミュレーションする。

    Args:
        params (SvcjParams): パラメーター
        flavor (ModelFlavor): モデルの種類
        v0 (float): 初期分散
        horizon (int): 日数
        rng (RngStream): 乱数ストリーム
        units (Units): パラメーターの単位
        start (date): 最初のリターンの日付

    Returns:
        Tuple[ReturnSeries, LatentPath]: リターン系列と潜在変数
    """
    paths = simulate_svcj_paths(params, flavor, v0, horizon, [rng])
    dates = [start + timedelta(days=t) for t in range(horizon)]
    returns = ReturnSeries(dates, paths.returns[0], units)
    latent = LatentPath(paths.variance[0], paths.jumps[0], paths.zy[0], paths.zv[0])
    return returns, latent


def br_step(
    params: BrParams,
    log_var: np.ndarray,
    u: np.ndarray,
    dt: float,
    bounds: Tuple[float, float] = DEFAULT_LOG_VARIANCE_BOUNDS,
) -> Tuple[np.ndarray, np.ndarray]:
    """BRモデルのオイラー離散化の1ステップを進める。

    uの最後の軸は (W1, W2, 独立リターンジャンプの到着, 独立分散ジャンプの到着,
    共通ジャンプの到着, 独立リターンジャンプのサイズ, 独立分散ジャンプのサイズ,
    共通ジャンプのサイズ2つ) の順に並ぶ。到着はBernoulli(lambda * dt)で近似する。

    Args:
        params (BrParams): パラメーター
        log_var (np.ndarray): 対数スポット分散
        u (np.ndarray): 最後の軸の長さがBR_COLUMNSの一様乱数
        dt (float): ステップ幅 (日)
        bounds (Tuple[float, float]): 対数分散の範囲

    Returns:
        Tuple[np.ndarray, np.ndarray]: 対数価格の増分と次の対数スポット分散
    """
    sigma = np.exp(0.5 * log_var)
    rho_t = np.clip(params.rho0 + params.rho1 * sigma, -1.0, 1.0)
    z1 = normal_from_uniform(u[..., 0])
    z2 = normal_from_uniform(u[..., 1])
    sqrt_dt = math.sqrt(dt)
    d_log_price = params.mu_r * dt + sigma * sqrt_dt * (
        rho_t * z1 + np.sqrt(1.0 - rho_t**2) * z2
    )
    d_log_var = (params.m0 + params.m1 * log_var) * dt + params.Lambda * sqrt_dt * z1

    arrive_r = u[..., 2] < params.lambda_r * dt
    arrive_sigma = u[..., 3] < params.lambda_sigma * dt
    arrive_common = u[..., 4] < params.lambda_rsigma * dt
    if arrive_r.any():
        size = params.mu_Jr + params.sigma_Jr * normal_from_uniform(u[..., 5])
        d_log_price = d_log_price + np.where(arrive_r, size, 0.0)
    if arrive_sigma.any():
        size = params.mu_Jsigma + params.sigma_Jsigma * normal_from_uniform(u[..., 6])
        d_log_var = d_log_var + np.where(arrive_sigma, size, 0.0)
    if arrive_common.any():
        a = normal_from_uniform(u[..., 7])
        b = params.rho_J * a + math.sqrt(1.0 - params.rho_J**2) * normal_from_uniform(
            u[..., 8]
        )
        mean_r = params.mu_JJr0 + params.mu_JJr1 * sigma
        sd_r = params.sigma_JJr0 + params.sigma_JJr1 * sigma**params.sigma_JJr2
        d_log_price = d_log_price + np.where(arrive_common, mean_r + sd_r * a, 0.0)
        d_log_var = d_log_var + np.where(
            arrive_common, params.mu_JJsigma + params.sigma_JJsigma * b, 0.0
        )
    return d_log_price, np.clip(log_var + d_log_var, bounds[0], bounds[1])


@dataclass
class BrPaths:
    """BRモデルの複数経路"""

    # 対数価格の増分 (経路数, T)
    returns: np.ndarray
    # スポット・ボラティリティ (経路数, T + 1)
    spot_vol: np.ndarray


def simulate_br_paths(
    params: BrParams,
    sigma0: float,
    horizon: int,
    dt: float,
    streams: Sequence[RngStream],
    bounds: Tuple[float, float] = DEFAULT_LOG_VARIANCE_BOUNDS,
    uniforms: Optional[np.ndarray] = None,
) -> BrPaths:
    """BRモデルの経路をまとめてシミュレーションする。

    Args:
        params (BrParams): パラメーター
        sigma0 (float): 初期スポット・ボラティリティ
        horizon (int): ステップ数
        dt (float): ステップ幅 (日)
        streams (Sequence[RngStream]): 経路ごとの乱数ストリーム
        bounds (Tuple[float, float]): 対数分散の範囲
        uniforms (Optional[np.ndarray]): 生成済みの一様乱数 (共通乱数を使う場合)

    Raises:
        InvalidInputError: 初期スポット・ボラティリティが正ではありません。
        InvalidInputError: ステップ幅が正ではありません。

    Returns:
        BrPaths: 経路
    """
    if not sigma0 > 0:
        raise InvalidInputError("初期スポット・ボラティリティが正ではありません。")
    if not dt > 0:
        raise InvalidInputError("ステップ幅が正ではありません。")
    if uniforms is None:
        uniforms = draw_uniforms(streams, horizon, BR_COLUMNS)
    n = uniforms.shape[0]
    returns = np.empty((n, horizon))
    log_var = np.empty((n, horizon + 1))
    log_var[:, 0] = 2.0 * math.log(sigma0)
    for t in range(horizon):
        returns[:, t], log_var[:, t + 1] = br_step(
            params, log_var[:, t], uniforms[:, t, :], dt, bounds
        )
    return BrPaths(returns, np.exp(0.5 * log_var))


def simulate_br(
    params: BrParams,
    sigma0: float,
    horizon: int,
    dt: float,
    rng: RngStream,
    units: Units = Units.Percent,
    start: date = DEFAULT_START,
    bounds: Tuple[float, float] = DEFAULT_LOG_VARIANCE_BOUNDS,
) -> Tuple[ReturnSeries, np.ndarray]:
    """BRモデルのリターンとスポット・ボラティリティをシミュレーションする。

    リターンの日付はステップの開始時刻とする。ステップ幅が1日以上の場合は日付、
    1日未満の場合は日時 (datetime) になり、ステップごとに異なる。

    Args:
        params (BrParams): パラメーター
        sigma0 (float): 初期スポット・ボラティリティ
        horizon (int): ステップ数
        dt (float): ステップ幅 (日)
        rng (RngStream): 乱数ストリーム
        units (Units): パラメーターの単位
        start (date): 最初のステップを含む日
        bounds (Tuple[float, float]): 対数分散の範囲

    Returns:
        Tuple[ReturnSeries, np.ndarray]: リターン系列と長さT + 1のスポット・ボラティリティ
    """
    paths = simulate_br_paths(params, sigma0, horizon, dt, [rng], bounds)
    if dt >= 1.0:
        dates = [start + timedelta(days=math.floor(t * dt)) for t in range(horizon)]
    else:
        origin = datetime.combine(start, time())
        dates = [origin + timedelta(days=t * dt) for t in range(horizon)]
    return ReturnSeries(dates, paths.returns[0], units), paths.spot_vol[0]
