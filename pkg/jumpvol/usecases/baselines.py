import logging
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from jumpvol.domain.models.baselines import FitReport
from jumpvol.domain.models.runs import RunConfig
from jumpvol.domain.models.series import Units, rescale
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.usecases.inputs import daily_returns, output_path
from jumpvol.utils.arima import arma_forecast, fit_arima, ljung_box
from jumpvol.utils.diagnostics import qq_points
from jumpvol.utils.garch import fit_tegarch, fit_tgarch, params_from_report

logger = logging.getLogger(__name__)

# GARCH族の推定値のファイル名
GARCH_FILE_NAME = "garch.json"

# GARCH族の標準化残差のQQプロットの点のファイル名
GARCH_QQ_FILE_NAME = "garch_qq.csv"

# ARIMAの推定値のファイル名
ARIMA_FILE_NAME = "arima.json"

# ARIMAの残差のファイル名
ARIMA_RESIDUALS_FILE_NAME = "arima_residuals.csv"


def _ljung_box_payload(residuals: np.ndarray, lags: int) -> Dict[str, Any]:
    statistic, p_value = ljung_box(residuals, lags)
    squared, squared_p = ljung_box(residuals**2, lags)
    return {
        "lags": lags,
        "statistic": statistic,
        "p_value": p_value,
        "squared_statistic": squared,
        "squared_p_value": squared_p,
    }


def _garch_payload(report: FitReport, lags: int) -> Dict[str, Any]:
    return {
        "params": params_from_report(report),
        "converged": report.converged,
        "at_boundary": report.at_boundary,
        "ljung_box": _ljung_box_payload(report.residuals, lags),
    }


def fit_garch_models(repo_manager: RepositoryManager, cfg: RunConfig) -> List[str]:
    """小数単位の日次リターンにt-GARCH(1,1)とt-EGARCH(1,1)を当てはめて保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    x = rescale(daily_returns(repo_manager, cfg), Units.Decimal).values
    lags = cfg.baselines.ljung_box_lags
    tgarch, tgarch_report = fit_tgarch(x)
    tegarch, tegarch_report = fit_tegarch(x)
    payload = {
        "tgarch": _garch_payload(tgarch_report, lags),
        "tegarch": _garch_payload(tegarch_report, lags),
    }
    frames = []
    for name, params, report in [
        ("tgarch", tgarch, tgarch_report),
        ("tegarch", tegarch, tegarch_report),
    ]:
        theoretical, sample = qq_points(report.residuals, params.nu)
        frames.append(
            pd.DataFrame({"model": name, "theoretical": theoretical, "sample": sample})
        )
    results = repo_manager.result()
    json_path = output_path(cfg, GARCH_FILE_NAME)
    qq_path = output_path(cfg, GARCH_QQ_FILE_NAME)
    results.write_json(json_path, payload)
    results.write_frame(qq_path, pd.concat(frames, ignore_index=True))
    return [json_path, qq_path]


def fit_arima_model(repo_manager: RepositoryManager, cfg: RunConfig) -> List[str]:
    """小数単位の日次リターンにARMA(p, q)を当てはめて保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    section = cfg.baselines
    x = rescale(daily_returns(repo_manager, cfg), Units.Decimal).values
    params, report = fit_arima(x, section.arima_p, section.arima_q)
    payload = {
        "p": section.arima_p,
        "q": section.arima_q,
        "params": params_from_report(report),
        "converged": report.converged,
        "stationary": params.is_stationary(),
        "invertible": params.is_invertible(),
        "forecast": float(arma_forecast(params, x, 1)[0]),
        "ljung_box": _ljung_box_payload(report.residuals, section.ljung_box_lags),
    }
    results = repo_manager.result()
    json_path = output_path(cfg, ARIMA_FILE_NAME)
    residuals_path = output_path(cfg, ARIMA_RESIDUALS_FILE_NAME)
    results.write_json(json_path, payload)
    results.write_frame(residuals_path, pd.DataFrame({"residual": report.residuals}))
    logger.info(
        "ARMA(%d, %d)の残差を保存しました (n=%d)。",
        section.arima_p,
        section.arima_q,
        len(report.residuals),
    )
    return [json_path, residuals_path]
