"""Crude Monte Carloによるヨーロピアン・オプションの価格計算

リスクプレミアムは0とし、推定したパラメーターのままシミュレーションした
日次対数リターンの和で満期の原資産価格を求める。経路iは常にcfg.seedの
サブストリームiを使うため、結果はスレッド数やチャンクサイズに依存しない。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from jumpvol.common.errors import InvalidInputError, NoSolutionError
from jumpvol.domain.models.options import (
    IvPoint,
    OptionKind,
    OptionSpec,
    PriceTable,
    PricingConfig,
    PricingModel,
    SvcjModel,
    V0Policy,
)
from jumpvol.utils.black_scholes import bs_implied_vol, intrinsic_value
from jumpvol.utils.simulation import simulate_br_paths, simulate_svcj_paths
from jumpvol.utils.units import (
    br_returns_to_decimal,
    svcj_to_decimal,
    variance_to_decimal,
)

logger = logging.getLogger(__name__)

# 警告を出さないマネーネスの範囲
MONEYNESS_RANGE: Tuple[float, float] = (0.5, 2.0)

# 本源的価値に張り付いた価格を逆算するときに加える相対的な幅
CLAMP_EPSILON = 1e-8


def initial_variance(model: PricingModel, cfg: PricingConfig) -> float:
    """設定に従って初期分散 (パーセント単位) を決める。

    Args:
        model (PricingModel): モデル
        cfg (PricingConfig): 設定

    Raises:
        InvalidInputError: 対数分散の長期平均が存在しません。
        InvalidInputError: 初期分散が負です。

    Returns:
        float: 初期分散
    """
    if cfg.v0_policy != V0Policy.LongRunMean:
        variance = float(cfg.v0_value)
    elif isinstance(model, SvcjModel):
        variance = model.params.restricted(model.flavor).long_run_variance()
    else:
        level = model.params.long_run_log_variance()
        if math.isnan(level):
            raise InvalidInputError("対数分散の長期平均が存在しません。")
        variance = math.exp(level)
    if not variance >= 0:
        raise InvalidInputError("初期分散が負です。")
    return variance


def br_steps(days: int, dt: float) -> int:
    """日数をBRモデルのステップ数に換算する。端数は切り上げる。"""
    return math.ceil(days / dt - 1e-9)


def _chunks(paths: int, size: int) -> List[Tuple[int, int]]:
    return [(start, min(start + size, paths)) for start in range(0, paths, size)]


def _map_chunks(
    worker: Callable[[int, int], np.ndarray], cfg: PricingConfig
) -> np.ndarray:
    """チャンクごとに経路を生成し、経路の順に連結する。"""
    chunks = _chunks(cfg.paths, cfg.chunk_size)
    if cfg.threads == 1:
        results = [worker(start, stop) for start, stop in chunks]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
            results = list(executor.map(lambda c: worker(*c), chunks))
    return np.concatenate(results, axis=0)


def simulate_log_returns(
    model: PricingModel, taus: Sequence[int], cfg: PricingConfig
) -> np.ndarray:
    """各満期までの小数単位の累積対数リターンをシミュレーションする。

    すべての満期で同じ経路を使う。

    Args:
        model (PricingModel): モデル
        taus (Sequence[int]): 満期までの日数
        cfg (PricingConfig): 設定

    Raises:
        InvalidInputError: 満期が空、または1日未満です。

    Returns:
        np.ndarray: 累積対数リターン (経路数, 満期の数)
    """
    if not taus or min(taus) < 1:
        raise InvalidInputError("満期が空、または1日未満です。")
    horizon = max(taus)
    checkpoints = np.asarray(taus) - 1
    if not isinstance(model, SvcjModel):
        horizon = br_steps(horizon, cfg.br_dt)
        checkpoints = np.array([br_steps(tau, cfg.br_dt) - 1 for tau in taus])
    v0 = initial_variance(model, cfg)

    def worker(start: int, stop: int) -> np.ndarray:
        streams = [cfg.seed.substream(i) for i in range(start, stop)]
        if isinstance(model, SvcjModel):
            paths = simulate_svcj_paths(
                svcj_to_decimal(model.params),
                model.flavor,
                variance_to_decimal(v0),
                horizon,
                streams,
                keep_latent=False,
            )
            returns = paths.returns
        else:
            paths = simulate_br_paths(
                model.params, math.sqrt(v0), horizon, cfg.br_dt, streams
            )
            returns = br_returns_to_decimal(paths.returns)
        return np.cumsum(returns, axis=1)[:, checkpoints]

    logger.debug(
        "経路をシミュレーションします (paths=%d, horizon=%d, threads=%d)。",
        cfg.paths,
        horizon,
        cfg.threads,
    )
    return _map_chunks(worker, cfg)


def _discounted_moments(
    payoff: np.ndarray, discount: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    n = payoff.shape[0]
    price = discount * payoff.mean(axis=0)
    spread = payoff.std(axis=0, ddof=1) if n > 1 else np.zeros(payoff.shape[1:])
    return price, discount * spread / math.sqrt(n)


def _payoff(terminal: np.ndarray, strikes: np.ndarray, kind: OptionKind) -> np.ndarray:
    if kind == OptionKind.Call:
        return np.maximum(terminal - strikes, 0.0)
    return np.maximum(strikes - terminal, 0.0)


def mc_price(
    model: PricingModel, opt: OptionSpec, cfg: PricingConfig
) -> Tuple[float, float]:
    """Crude Monte Carloでオプション価格を計算する。

    Args:
        model (PricingModel): モデル
        opt (OptionSpec): オプション
        cfg (PricingConfig): 設定

    Returns:
        Tuple[float, float]: 価格と標準誤差
    """
    log_returns = simulate_log_returns(model, [opt.tau], cfg)
    terminal = opt.spot * np.exp(log_returns[:, 0])
    payoff = _payoff(terminal, np.array(opt.strike), opt.kind)
    price, std_error = _discounted_moments(payoff[:, None], np.array([opt.discount]))
    return float(price[0]), float(std_error[0])


def price_grid(
    model: PricingModel,
    strikes: Sequence[float],
    taus: Sequence[int],
    spot: float,
    cfg: PricingConfig,
    rate: float = 0.0,
    kind: OptionKind = OptionKind.Call,
) -> PriceTable:
    """権利行使価格と満期の格子でオプション価格を計算する。

    すべての権利行使価格と満期で同じ経路を使うため、満期ごとの価格は
    権利行使価格について単調かつ凸になる。

    Args:
        model (PricingModel): モデル
        strikes (Sequence[float]): 権利行使価格
        taus (Sequence[int]): 満期までの日数
        spot (float): 現在の原資産価格
        cfg (PricingConfig): 設定
        rate (float): 1日当たりの連続複利の無リスク金利
        kind (OptionKind): オプションの種類

    Raises:
        InvalidInputError: 権利行使価格が空です。

    Returns:
        PriceTable: 価格表
    """
    if not strikes:
        raise InvalidInputError("権利行使価格が空です。")
    log_returns = simulate_log_returns(model, taus, cfg)
    terminal = spot * np.exp(log_returns)
    strike_array = np.asarray(strikes, dtype=float)
    # (経路数, 権利行使価格の数, 満期の数)
    payoff = _payoff(terminal[:, None, :], strike_array[None, :, None], kind)
    discount = np.exp(-rate * np.asarray(taus, dtype=float))[None, :]
    prices, std_errors = _discounted_moments(payoff, discount)
    logger.info(
        "価格表を計算しました (strikes=%d, taus=%d, paths=%d)。",
        len(strikes),
        len(taus),
        cfg.paths,
    )
    return PriceTable(list(strikes), list(taus), prices, std_errors)


def _implied_vol_point(
    moneyness: float,
    tau: int,
    price: float,
    std_error: float,
    spot: float,
    rate: float,
) -> IvPoint:
    strike = moneyness * spot
    lower = intrinsic_value(spot, strike, rate, tau)
    target = price
    # 本源的価値から標準誤差の範囲内で下回った価格は本源的価値の直上に寄せる
    if std_error > 0 and 0 <= lower - price <= std_error:
        target = lower + CLAMP_EPSILON * spot
    try:
        vol = bs_implied_vol(target, spot, strike, rate, tau)
    except NoSolutionError as e:
        return IvPoint(moneyness, tau, None, price, std_error, str(e))
    return IvPoint(moneyness, tau, vol, price, std_error)


def iv_surface(
    model: PricingModel,
    moneyness_grid: Sequence[float],
    taus: Sequence[int],
    spot: float,
    cfg: PricingConfig,
    rate: float = 0.0,
) -> List[IvPoint]:
    """Monte Carlo価格から逆算したインプライド・ボラティリティ曲面を計算する。

    逆算できない点は欠損として理由とともに返す。

    Args:
        model (PricingModel): モデル
        moneyness_grid (Sequence[float]): マネーネス (K / S_t)
        taus (Sequence[int]): 満期までの日数
        spot (float): 現在の原資産価格
        cfg (PricingConfig): 設定
        rate (float): 1日当たりの連続複利の無リスク金利

    Returns:
        List[IvPoint]: 満期、マネーネスの順に並べた曲面の点
    """
    low, high = MONEYNESS_RANGE
    outside = [m for m in moneyness_grid if not low <= m <= high]
    if outside:
        logger.warning("マネーネスが推奨範囲外です: %s", outside)
    strikes = [m * spot for m in moneyness_grid]
    table = price_grid(model, strikes, taus, spot, cfg, rate)
    points = [
        _implied_vol_point(
            m,
            tau,
            float(table.prices[i, j]),
            float(table.std_errors[i, j]),
            spot,
            rate,
        )
        for j, tau in enumerate(taus)
        for i, m in enumerate(moneyness_grid)
    ]
    missing = sum(point.is_missing for point in points)
    if missing:
        logger.warning(
            "インプライド・ボラティリティを逆算できない点があります (%d / %d)。",
            missing,
            len(points),
        )
    return points


def variance_paths(
    model: PricingModel,
    horizon: int,
    cfg: PricingConfig,
    quantiles: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """シミュレーションした日次分散 (小数単位) の経路の要約を返す。

    Args:
        model (PricingModel): モデル
        horizon (int): 日数
        cfg (PricingConfig): 設定
        quantiles (Optional[Sequence[float]]): 平均に加えて求める分位点

    Raises:
        InvalidInputError: 日数が1未満です。

    Returns:
        np.ndarray: 1行目が平均、以降が分位点の (1 + 分位点の数, horizon + 1) の配列
    """
    if horizon < 1:
        raise InvalidInputError("日数が1未満です。")
    v0 = initial_variance(model, cfg)

    def worker(start: int, stop: int) -> np.ndarray:
        streams = [cfg.seed.substream(i) for i in range(start, stop)]
        if isinstance(model, SvcjModel):
            paths = simulate_svcj_paths(
                svcj_to_decimal(model.params),
                model.flavor,
                variance_to_decimal(v0),
                horizon,
                streams,
                keep_latent=False,
            )
            return paths.variance
        steps = br_steps(horizon, cfg.br_dt)
        paths = simulate_br_paths(
            model.params, math.sqrt(v0), steps, cfg.br_dt, streams
        )
        daily = [br_steps(day, cfg.br_dt) for day in range(horizon + 1)]
        return variance_to_decimal(paths.spot_vol[:, daily] ** 2)

    variance = _map_chunks(worker, cfg)
    rows = [variance.mean(axis=0)]
    if quantiles:
        rows.extend(np.quantile(variance, quantiles, axis=0))
    return np.vstack(rows)
