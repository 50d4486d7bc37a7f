"""ノンパラメトリック無限小積率法 (NIMM) によるBRモデルの推定

モデルの無限小交差モーメントは閉じた形で求めず、評価点のスポット・ボラティリティ
から1日をsubsteps個に分割してBRモデルをシミュレーションし、増分の積の平均を
1日の長さで割って求める。最適化の反復の間で同じ一様乱数 (共通乱数) を使うため、
目的関数はパラメーターの決定的な関数になる。
"""

import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from jumpvol.common import RngStream
from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.br import (
    BR_PARAMETER_NAMES,
    INTENSITY_NAMES,
    STANDARD_DEVIATION_NAMES,
    BrParams,
    NimmConfig,
    NimmReport,
    Restriction,
)
from jumpvol.domain.models.intraday import CrossMomentEstimate
from jumpvol.utils.highfreq import DELTA, REQUIRED_ORDERS
from jumpvol.utils.simulation import BR_COLUMNS, br_step

logger = logging.getLogger(__name__)

# 許容できないパラメーターに与える目的関数の値
PENALTY = 1e20

Order = Tuple[int, int]


def draw_common_uniforms(reps: int, substeps: int, seed: RngStream) -> np.ndarray:
    """モデルの交差モーメントに用いる共通乱数を生成する。

    Args:
        reps (int): 複製の数
        substeps (int): 1日を分割するステップ数
        seed (RngStream): 乱数ストリーム

    Returns:
        np.ndarray: 形状 (reps, substeps, BR_COLUMNS) の一様乱数
    """
    return seed.generator().random((reps, substeps, BR_COLUMNS))


def model_cross_moments(
    params: BrParams,
    sigma_grid: np.ndarray,
    orders: Sequence[Order],
    uniforms: np.ndarray,
    delta: float = DELTA,
) -> Dict[Order, np.ndarray]:
    """シミュレーションでモデルの無限小交差モーメントを求める。

    Args:
        params (BrParams): パラメーター
        sigma_grid (np.ndarray): 評価点 (スポット・ボラティリティ)
        orders (Sequence[Order]): 次数
        uniforms (np.ndarray): 共通乱数 (reps, substeps, BR_COLUMNS)
        delta (float): 増分をとる期間 (日)

    Returns:
        Dict[Order, np.ndarray]: 次数ごとの評価点における交差モーメント
    """
    substeps = uniforms.shape[1]
    dt = delta / substeps
    grid = np.asarray(sigma_grid, dtype=float)
    start = np.repeat(2.0 * np.log(grid)[:, None], uniforms.shape[0], axis=1)
    log_var = start
    d_price = np.zeros_like(start)
    for s in range(substeps):
        increment, log_var = br_step(params, log_var, uniforms[:, s, :], dt)
        d_price += increment
    d_log_var = log_var - start
    return {
        (p1, p2): np.mean(d_price**p1 * d_log_var**p2, axis=1) / delta
        for p1, p2 in orders
    }


def moment_weights(
    estimate: CrossMomentEstimate, floor_quantile: float
) -> np.ndarray:
    """カーネル推定値の分散の逆数を重みとして返す。

    分散は正の分散の分位点で下から抑える。欠損した評価点の重みは0とする。

    Args:
        estimate (CrossMomentEstimate): 推定値
        floor_quantile (float): 下限に用いる分位点

    Returns:
        np.ndarray: 評価点ごとの重み
    """
    variance = estimate.std_error**2
    valid = np.isfinite(estimate.theta_hat) & np.isfinite(variance)
    positive = variance[valid & (variance > 0)]
    floor = float(np.quantile(positive, floor_quantile)) if len(positive) else 1.0
    weights = np.zeros_like(variance)
    weights[valid] = 1.0 / np.maximum(variance[valid], floor)
    return weights


def _parameter_bounds(name: str) -> Tuple[Optional[float], Optional[float]]:
    if name in INTENSITY_NAMES or name in STANDARD_DEVIATION_NAMES:
        return (0.0, None)
    if name == "rho_J":
        return (-1.0, 1.0)
    return (None, None)


def _clip(
    x: np.ndarray, bounds: List[Tuple[Optional[float], Optional[float]]]
) -> np.ndarray:
    lower = np.array([-np.inf if lo is None else lo for lo, _ in bounds])
    upper = np.array([np.inf if hi is None else hi for _, hi in bounds])
    return np.clip(x, lower, upper)


class _Objective:
    """重み付き二乗誤差の目的関数"""

    def __init__(
        self,
        moments: Mapping[Order, CrossMomentEstimate],
        base: BrParams,
        free: List[str],
        uniforms: np.ndarray,
        floor_quantile: float,
    ) -> None:
        self.base = base.as_dict()
        self.free = free
        self.uniforms = uniforms
        self.orders = list(moments)
        self.grid = next(iter(moments.values())).sigma_grid
        self.targets = {
            order: np.nan_to_num(m.theta_hat) for order, m in moments.items()
        }
        self.weights = {
            order: moment_weights(m, floor_quantile) for order, m in moments.items()
        }
        self.evaluations = 0

    def params(self, x: np.ndarray) -> BrParams:
        values = dict(self.base)
        values.update(zip(self.free, (float(v) for v in x)))
        return BrParams.from_dict(values)

    def contributions(self, params: BrParams) -> Dict[Order, float]:
        model = model_cross_moments(params, self.grid, self.orders, self.uniforms)
        return {
            order: float(
                np.sum(self.weights[order] * (self.targets[order] - model[order]) ** 2)
            )
            for order in self.orders
        }

    def __call__(self, x: np.ndarray) -> float:
        self.evaluations += 1
        try:
            params = self.params(x)
        except ValueError:
            return PENALTY
        with np.errstate(all="ignore"):
            total = sum(self.contributions(params).values())
        return total if math.isfinite(total) else PENALTY


def nimm_calibrate(
    moments: Mapping[Order, CrossMomentEstimate],
    init: BrParams,
    restriction: Restriction = Restriction.Full,
    config: Optional[NimmConfig] = None,
) -> Tuple[BrParams, NimmReport]:
    """カーネル推定した交差モーメントにモデルの交差モーメントを合わせてBRモデルを推定する。

    Nelder-Mead法を初期値と、初期値を摂動した点から開始し、目的関数が最小の点を採る。
    どの開始点からも初期値を改善できない場合は初期値を返す。

    Args:
        moments (Mapping[Order, CrossMomentEstimate]): 次数ごとの交差モーメント
        init (BrParams): 初期値
        restriction (Restriction): 制約
        config (Optional[NimmConfig]): 設定

    Raises:
        InvalidInputError: 初期値がBRパラメーターではありません。
        InvalidInputError: 必要な次数の交差モーメントがありません。
        InvalidInputError: 交差モーメントの評価点が一致しません。

    Returns:
        Tuple[BrParams, NimmReport]: 推定値と推定の結果
    """
    config = config or NimmConfig()
    if not isinstance(init, BrParams):
        raise InvalidInputError("初期値がBRパラメーターではありません。")
    missing = [order for order in REQUIRED_ORDERS if order not in moments]
    if missing:
        raise InvalidInputError(f"必要な次数の交差モーメントがありません: {missing}")
    grids = [m.sigma_grid for m in moments.values()]
    if any(not np.array_equal(grids[0], grid) for grid in grids[1:]):
        raise InvalidInputError("交差モーメントの評価点が一致しません。")

    base = init.restricted(restriction)
    pinned = set(restriction.pinned()) | set(config.fixed)
    free = [name for name in BR_PARAMETER_NAMES if name not in pinned]
    uniforms = draw_common_uniforms(
        config.reps, config.substeps, config.seed.substream(0)
    )
    objective = _Objective(moments, base, free, uniforms, config.weight_floor_quantile)
    x0 = np.array([getattr(base, name) for name in free])
    initial_objective = objective(x0)
    logger.info(
        "NIMMを開始します (restriction=%s, free=%d, objective=%.6g)。",
        restriction.value,
        len(free),
        initial_objective,
    )

    best_x, best_value, converged = x0, math.inf, False
    if free:
        bounds = [_parameter_bounds(name) for name in free]
        gen = config.seed.substream(1).generator()
        starts = [x0]
        for _ in range(config.restarts - 1):
            noise = gen.standard_normal(len(x0))
            scale = config.perturbation * (np.abs(x0) + 0.01)
            starts.append(_clip(x0 + scale * noise, bounds))
        for k, start in enumerate(starts):
            result = minimize(
                objective,
                start,
                method="Nelder-Mead",
                bounds=bounds,
                options={
                    "maxiter": config.max_iterations,
                    "xatol": 1e-8,
                    "fatol": 1e-12,
                    "adaptive": True,
                },
            )
            logger.debug(
                "開始点%dの最適化を終了しました (objective=%.6g, success=%s)。",
                k,
                result.fun,
                result.success,
            )
            converged = converged or bool(result.success)
            if result.fun < best_value:
                best_x, best_value = np.asarray(result.x), float(result.fun)

    returned_initial = not best_value < initial_objective
    if returned_initial:
        best_x, best_value = x0, initial_objective
    if not converged and free:
        logger.warning("NIMMの最適化が収束しませんでした。")
    params = objective.params(best_x)
    with np.errstate(all="ignore"):
        contributions = objective.contributions(params)
    report = NimmReport(
        restriction=restriction,
        free=free,
        objective=best_value,
        initial_objective=initial_objective,
        converged=converged or not free,
        evaluations=objective.evaluations,
        restarts=config.restarts,
        returned_initial=returned_initial,
        contributions={f"{p1},{p2}": v for (p1, p2), v in contributions.items()},
    )
    return params, report
