import logging
import os
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.br import REFERENCE_BR_PARAMS, BrParams, NimmConfig
from jumpvol.domain.models.intraday import CrossMomentEstimate, IntradayPanel
from jumpvol.domain.models.runs import RunConfig
from jumpvol.domain.models.series import PERCENT_FACTOR
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.usecases.inputs import intraday_panel, output_path, stage_stream
from jumpvol.utils.highfreq import (
    REQUIRED_ORDERS,
    cross_moments,
    default_grid,
    spot_variance_tbv,
)
from jumpvol.utils.nimm import nimm_calibrate

logger = logging.getLogger(__name__)

# スポット分散のファイル名
SPOTVAR_FILE_NAME = "spotvar.csv"

# 日ごとの平均スポット・ボラティリティのファイル名
DAILY_VOL_FILE_NAME = "daily_vol.csv"

# 交差モーメントのファイル名
CROSSMOM_FILE_NAME = "crossmom.csv"

# NIMMによる推定値のファイル名
NIMM_FILE_NAME = "nimm.json"

Order = Tuple[int, int]


def percent_panel(panel: IntradayPanel) -> IntradayPanel:
    """リターンと対数価格をパーセント単位に変換したパネルを返す。

    BRモデルのパラメーターはパーセント単位のリターンで定義する。

    Args:
        panel (IntradayPanel): 小数単位のパネル

    Returns:
        IntradayPanel: パーセント単位のパネル
    """
    return IntradayPanel(
        panel.returns * PERCENT_FACTOR, panel.closes() * PERCENT_FACTOR
    )


def _estimate_moments(
    repo_manager: RepositoryManager, cfg: RunConfig
) -> Dict[Order, CrossMomentEstimate]:
    panel = percent_panel(intraday_panel(repo_manager, cfg))
    spot = spot_variance_tbv(panel, cfg.highfreq.threshold_mult)
    grid = default_grid(spot, cfg.highfreq.grid_points)
    return cross_moments(
        panel.closes(), spot, REQUIRED_ORDERS, grid, cfg.highfreq.bandwidth
    )


def estimate_spot_variance(
    repo_manager: RepositoryManager, cfg: RunConfig
) -> List[str]:
    """閾値付きバイパワー変動でスポット分散を推定して保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    panel = percent_panel(intraday_panel(repo_manager, cfg))
    spot = spot_variance_tbv(panel, cfg.highfreq.threshold_mult)
    days, knots = spot.sigma2_hat.shape
    frame = pd.DataFrame(
        {
            "day": np.repeat(np.arange(days), knots),
            "knot": np.tile(np.arange(knots), days),
            "sigma2_hat": spot.sigma2_hat.reshape(-1),
            "daily_variance": spot.daily_variance().reshape(-1),
            "n_j": spot.n_j.reshape(-1),
        }
    )
    daily = pd.DataFrame(
        {"day": np.arange(days), "volatility": spot.daily_average_volatility()}
    )
    results = repo_manager.result()
    spot_path = output_path(cfg, SPOTVAR_FILE_NAME)
    daily_path = output_path(cfg, DAILY_VOL_FILE_NAME)
    results.write_frame(spot_path, frame)
    results.write_frame(daily_path, daily)
    logger.info(
        "スポット分散を推定しました (days=%d, knots=%d, jumps=%d)。",
        days,
        knots,
        int(spot.n_j.sum()),
    )
    return [spot_path, daily_path]


def estimate_cross_moments(
    repo_manager: RepositoryManager, cfg: RunConfig
) -> List[str]:
    """無限小交差モーメントをカーネル推定して保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    moments = _estimate_moments(repo_manager, cfg)
    frames = [
        pd.DataFrame(
            {
                "p1": m.p1,
                "p2": m.p2,
                "sigma": m.sigma_grid,
                "theta_hat": m.theta_hat,
                "std_error": m.std_error,
                "bandwidth": m.bandwidth,
            }
        )
        for m in moments.values()
    ]
    path = output_path(cfg, CROSSMOM_FILE_NAME)
    repo_manager.result().write_frame(path, pd.concat(frames, ignore_index=True))
    return [path]


def calibrate_br(repo_manager: RepositoryManager, cfg: RunConfig) -> List[str]:
    """交差モーメントにモデルを合わせてBRモデルを推定し、保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    section = cfg.highfreq
    moments = _estimate_moments(repo_manager, cfg)
    config = NimmConfig(
        reps=section.reps,
        seed=stage_stream(cfg, "nimm"),
        restarts=section.restarts,
        max_iterations=section.max_iterations,
        fixed=tuple(section.fixed),
    )
    params, report = nimm_calibrate(
        moments, REFERENCE_BR_PARAMS, section.restriction, config
    )
    payload = {
        "params": params.as_dict(),
        "restriction": report.restriction.value,
        "free": report.free,
        "objective": report.objective,
        "initial_objective": report.initial_objective,
        "converged": report.converged,
        "evaluations": report.evaluations,
        "restarts": report.restarts,
        "returned_initial": report.returned_initial,
        "contributions": report.contributions,
    }
    path = output_path(cfg, NIMM_FILE_NAME)
    repo_manager.result().write_json(path, payload)
    return [path]


def load_br_params(repo_manager: RepositoryManager, cfg: RunConfig) -> BrParams:
    """保存したBRモデルの推定値を読み込む。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Raises:
        InvalidInputError: BRモデルの推定結果がありません。

    Returns:
        BrParams: パラメーター
    """
    path = output_path(cfg, NIMM_FILE_NAME)
    if not os.path.isfile(path):
        raise InvalidInputError(f"BRモデルの推定結果がありません: {path}")
    return BrParams.from_dict(repo_manager.result().read_json(path)["params"])
