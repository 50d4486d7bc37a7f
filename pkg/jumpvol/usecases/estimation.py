import logging
import os
from typing import List, Optional

import pandas as pd

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.mcmc import McmcConfig, PosteriorSummary, PriorSpec
from jumpvol.domain.models.runs import RunConfig
from jumpvol.domain.models.series import ReturnSeries
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.usecases.inputs import (
    FIT_DIR_NAME,
    daily_returns,
    output_path,
    stage_stream,
)
from jumpvol.utils.diagnostics import detect_jumps, qq_points, standardized_residuals
from jumpvol.utils.svcj_sampler import run_chains, summarize

logger = logging.getLogger(__name__)

# 日ごとの事後平均のファイル名
DAILY_FILE_NAME = "daily.csv"

# ジャンプ判定のファイル名
JUMPS_FILE_NAME = "jumps.csv"

# 標準化残差のファイル名
RESIDUALS_FILE_NAME = "residuals.csv"

# 標準化残差のQQプロットの点のファイル名
RESIDUALS_QQ_FILE_NAME = "residuals_qq.csv"


def mcmc_config(cfg: RunConfig) -> McmcConfig:
    """実行設定からMCMCの設定を構築する。

    Args:
        cfg (RunConfig): 実行設定

    Returns:
        McmcConfig: MCMCの設定
    """
    section = cfg.mcmc
    return McmcConfig(
        iterations=section.iterations,
        burn_in=section.burn_in,
        mh_target_accept=section.mh_target_accept,
        seed=stage_stream(cfg, "fit"),
        latent_thin=section.latent_thin,
    )


def daily_frame(returns: ReturnSeries, summary: PosteriorSummary) -> pd.DataFrame:
    """日ごとの事後平均とジャンプの判定を返す。

    分散は各日の終わりの値 (V_1からV_T) とする。

    Args:
        returns (ReturnSeries): 日次リターン
        summary (PosteriorSummary): 事後分布の要約

    Raises:
        InvalidInputError: リターンと事後分布の要約の長さが一致しません。

    Returns:
        pd.DataFrame: 1日1行のデータフレーム
    """
    if len(returns) != len(summary.jump_probability):
        raise InvalidInputError("リターンと事後分布の要約の長さが一致しません。")
    return pd.DataFrame(
        {
            "date": [d.isoformat() for d in returns.dates],
            "jump_probability": summary.jump_probability,
            "jump": detect_jumps(summary.jump_probability, summary.mean["lam"]),
            "jump_size_y": summary.jump_size_y,
            "jump_size_v": summary.jump_size_v,
            "variance_mean": summary.variance_path[1:],
        }
    )


def fit_model(repo_manager: RepositoryManager, cfg: RunConfig) -> List[str]:
    """日次リターンにSV、SVJ、SVCJモデルを当てはめ、連鎖と要約を保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    returns = daily_returns(repo_manager, cfg)
    priors = PriorSpec().overridden(cfg.priors)
    chains = run_chains(
        returns,
        cfg.mcmc.flavor,
        priors,
        mcmc_config(cfg),
        cfg.mcmc.chains,
        cfg.core.threads,
    )
    summary = summarize(chains, returns)
    logger.info(
        "%sモデルを推定しました (mse=%.4f, jumps=%d)。",
        cfg.mcmc.flavor.value,
        summary.mse,
        int(summary.detected_jumps.sum()),
    )
    paths = repo_manager.chain().save(output_path(cfg, FIT_DIR_NAME), chains, summary)
    daily_path = output_path(cfg, DAILY_FILE_NAME)
    repo_manager.result().write_frame(daily_path, daily_frame(returns, summary))
    return paths + [daily_path]


def load_fit_summary(
    repo_manager: RepositoryManager, cfg: RunConfig
) -> PosteriorSummary:
    """保存した事後分布の要約を読み込む。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Raises:
        InvalidInputError: 推定結果がありません。

    Returns:
        PosteriorSummary: 事後分布の要約
    """
    directory = output_path(cfg, FIT_DIR_NAME)
    if not os.path.isdir(directory):
        raise InvalidInputError(f"推定結果がありません: {directory}")
    return repo_manager.chain().load_summary(directory)


def flag_jumps(
    repo_manager: RepositoryManager,
    cfg: RunConfig,
    summary: Optional[PosteriorSummary] = None,
) -> List[str]:
    """ジャンプ確率からジャンプを判定して保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        summary (Optional[PosteriorSummary]): 事後分布の要約 (Noneの場合は読み込む)

    Raises:
        InvalidInputError: リターンと事後分布の要約の長さが一致しません。

    Returns:
        List[str]: 保存したファイルのパス
    """
    summary = summary or load_fit_summary(repo_manager, cfg)
    returns = daily_returns(repo_manager, cfg)
    frame = daily_frame(returns, summary)
    flagged = frame["jump"].to_numpy()
    path = output_path(cfg, JUMPS_FILE_NAME)
    repo_manager.result().write_frame(path, frame)
    logger.info(
        "ジャンプを判定しました (%d / %d日、lambda=%.4f)。",
        int(flagged.sum()),
        len(flagged),
        summary.mean["lam"],
    )
    return [path]


def residual_diagnostics(
    repo_manager: RepositoryManager,
    cfg: RunConfig,
    summary: Optional[PosteriorSummary] = None,
) -> List[str]:
    """標準化残差とQQプロットの点を保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        summary (Optional[PosteriorSummary]): 事後分布の要約 (Noneの場合は読み込む)

    Returns:
        List[str]: 保存したファイルのパス
    """
    summary = summary or load_fit_summary(repo_manager, cfg)
    returns = daily_returns(repo_manager, cfg)
    residuals = standardized_residuals(returns, summary)
    theoretical, sample = qq_points(residuals)
    results = repo_manager.result()
    residuals_path = output_path(cfg, RESIDUALS_FILE_NAME)
    qq_path = output_path(cfg, RESIDUALS_QQ_FILE_NAME)
    results.write_frame(
        residuals_path,
        pd.DataFrame(
            {"date": [d.isoformat() for d in returns.dates], "residual": residuals}
        ),
    )
    results.write_frame(
        qq_path, pd.DataFrame({"theoretical": theoretical, "sample": sample})
    )
    return [residuals_path, qq_path]
