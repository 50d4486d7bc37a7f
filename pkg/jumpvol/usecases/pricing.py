import logging
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.br import REFERENCE_BR_PARAMS
from jumpvol.domain.models.mcmc import PosteriorSummary
from jumpvol.domain.models.options import (
    BrModel,
    ModelFamily,
    OptionSpec,
    PricingConfig,
    PricingModel,
    SvcjModel,
    V0Policy,
)
from jumpvol.domain.models.runs import RunConfig
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.usecases.estimation import load_fit_summary
from jumpvol.usecases.highfreq import load_br_params
from jumpvol.usecases.inputs import output_path, stage_stream
from jumpvol.usecases.simulate import simulation_params
from jumpvol.utils.monte_carlo import iv_surface, mc_price, price_grid, variance_paths

logger = logging.getLogger(__name__)

# 単一のオプション価格のファイル名
PRICE_FILE_NAME = "price.json"

# 価格表のファイル名
PRICE_GRID_FILE_NAME = "price_grid.csv"

# 価格表の標準誤差のファイル名
PRICE_GRID_SE_FILE_NAME = "price_grid_se.csv"

# インプライド・ボラティリティ曲面のファイル名
IV_SURFACE_FILE_NAME = "iv_surface.csv"

# シミュレーションした分散の経路の要約のファイル名
VARIANCE_PATHS_FILE_NAME = "variance_paths.csv"

# 分散の経路の要約に含める分位点
VARIANCE_QUANTILES: List[float] = [0.05, 0.5, 0.95]


def pricing_model(
    repo_manager: RepositoryManager,
    cfg: RunConfig,
    use_fit: bool = False,
    use_nimm: bool = False,
) -> Tuple[PricingModel, Optional[PosteriorSummary]]:
    """価格計算に用いるモデルを決める。

    SVCJ系のモデルは、推定結果を使う場合は事後平均と[mcmc]のflavor、使わない場合は
    [simulate]のパラメーターとflavorとする。BRモデルは、推定結果を使う場合は
    NIMMの推定値、使わない場合は制約なしの既定値とする。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        use_fit (bool): MCMCの推定結果を使うか
        use_nimm (bool): NIMMの推定結果を使うか

    Returns:
        Tuple[PricingModel, Optional[PosteriorSummary]]: モデルと事後分布の要約
    """
    summary = load_fit_summary(repo_manager, cfg) if use_fit else None
    if cfg.pricing.model == ModelFamily.Br:
        params = load_br_params(repo_manager, cfg) if use_nimm else REFERENCE_BR_PARAMS
        return BrModel(params.restricted(cfg.highfreq.restriction)), summary
    if summary is not None:
        flavor = cfg.mcmc.flavor
        params = summary.posterior_params()
    else:
        flavor = cfg.simulate.flavor
        params = simulation_params(cfg.simulate)
    return SvcjModel(params.restricted(flavor), flavor), summary


def pricing_config(
    cfg: RunConfig, stage: str, summary: Optional[PosteriorSummary] = None
) -> PricingConfig:
    """実行設定からMonte Carloの設定を構築する。

    Args:
        cfg (RunConfig): 実行設定
        stage (str): 乱数ストリームを割り当てるステージ
        summary (Optional[PosteriorSummary]): 事後分布の要約

    Raises:
        InvalidInputError: 推定した最終日の分散を使うには推定結果が必要です。
        InvalidInputError: BRモデルでは推定した最終日の分散を使えません。

    Returns:
        PricingConfig: 設定
    """
    section = cfg.pricing
    v0_value = section.v0_value
    if section.v0_policy == V0Policy.PosteriorLastDay:
        if section.model == ModelFamily.Br:
            raise InvalidInputError("BRモデルでは推定した最終日の分散を使えません。")
        if summary is None:
            raise InvalidInputError(
                "推定した最終日の分散を使うには推定結果が必要です。"
            )
        v0_value = float(summary.variance_path[-1])
    try:
        return PricingConfig(
            paths=section.paths,
            seed=stage_stream(cfg, stage),
            v0_policy=section.v0_policy,
            v0_value=v0_value,
            threads=cfg.core.threads,
            chunk_size=section.chunk_size,
            br_dt=section.br_dt,
        )
    except ValueError as e:
        raise InvalidInputError(str(e)) from e


def _model_description(model: PricingModel) -> dict:
    if isinstance(model, SvcjModel):
        description = {"family": "svcj", "flavor": model.flavor.value}
        return {**description, **model.params.as_dict()}
    return {"family": "br", **model.params.as_dict()}


def price_option(
    repo_manager: RepositoryManager,
    cfg: RunConfig,
    use_fit: bool = False,
    use_nimm: bool = False,
) -> List[str]:
    """単一のヨーロピアン・オプションの価格を計算して保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        use_fit (bool): MCMCの推定結果を使うか
        use_nimm (bool): NIMMの推定結果を使うか

    Returns:
        List[str]: 保存したファイルのパス
    """
    section = cfg.pricing
    model, summary = pricing_model(repo_manager, cfg, use_fit, use_nimm)
    pricing = pricing_config(cfg, "price", summary)
    opt = OptionSpec(
        section.spot, section.strike, section.tau, section.rate, section.kind
    )
    price, std_error = mc_price(model, opt, pricing)
    payload = {
        "model": _model_description(model),
        "spot": opt.spot,
        "strike": opt.strike,
        "tau": opt.tau,
        "rate": opt.rate,
        "kind": opt.kind.value,
        "moneyness": opt.moneyness,
        "paths": pricing.paths,
        "price": price,
        "std_error": std_error,
    }
    path = output_path(cfg, PRICE_FILE_NAME)
    repo_manager.result().write_json(path, payload)
    logger.info("オプション価格を計算しました (price=%.4f, se=%.4f)。", price, std_error)
    return [path]


def _table_frame(
    strikes: List[float], taus: List[int], values: np.ndarray
) -> pd.DataFrame:
    frame = pd.DataFrame(values, columns=[str(tau) for tau in taus])
    frame.insert(0, "strike", strikes)
    return frame


def price_table(
    repo_manager: RepositoryManager,
    cfg: RunConfig,
    use_fit: bool = False,
    use_nimm: bool = False,
) -> List[str]:
    """権利行使価格 x 満期の価格表を計算して保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        use_fit (bool): MCMCの推定結果を使うか
        use_nimm (bool): NIMMの推定結果を使うか

    Returns:
        List[str]: 保存したファイルのパス
    """
    section = cfg.pricing
    model, summary = pricing_model(repo_manager, cfg, use_fit, use_nimm)
    table = price_grid(
        model,
        section.strikes,
        section.taus,
        section.spot,
        pricing_config(cfg, "price_grid", summary),
        section.rate,
        section.kind,
    )
    results = repo_manager.result()
    prices_path = output_path(cfg, PRICE_GRID_FILE_NAME)
    errors_path = output_path(cfg, PRICE_GRID_SE_FILE_NAME)
    results.write_frame(
        prices_path, _table_frame(table.strikes, table.taus, table.prices)
    )
    results.write_frame(
        errors_path, _table_frame(table.strikes, table.taus, table.std_errors)
    )
    return [prices_path, errors_path]


def implied_vol_surface(
    repo_manager: RepositoryManager,
    cfg: RunConfig,
    use_fit: bool = False,
    use_nimm: bool = False,
) -> List[str]:
    """インプライド・ボラティリティ曲面と分散の経路の要約を計算して保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定
        use_fit (bool): MCMCの推定結果を使うか
        use_nimm (bool): NIMMの推定結果を使うか

    Returns:
        List[str]: 保存したファイルのパス
    """
    section = cfg.pricing
    model, summary = pricing_model(repo_manager, cfg, use_fit, use_nimm)
    pricing = pricing_config(cfg, "iv_surface", summary)
    points = iv_surface(
        model,
        section.moneyness,
        section.surface_taus,
        section.spot,
        pricing,
        section.rate,
    )
    surface = pd.DataFrame(
        {
            "tau": [p.tau for p in points],
            "moneyness": [p.moneyness for p in points],
            "implied_vol": [np.nan if p.is_missing else p.implied_vol for p in points],
            "price": [p.price for p in points],
            "std_error": [p.std_error for p in points],
            "reason": [p.reason for p in points],
        }
    )
    horizon = max(section.surface_taus)
    summary_rows = variance_paths(model, horizon, pricing, VARIANCE_QUANTILES)
    paths = pd.DataFrame({"day": np.arange(horizon + 1), "mean": summary_rows[0]})
    for q, row in zip(VARIANCE_QUANTILES, summary_rows[1:]):
        paths[f"q{round(q * 100):02d}"] = row
    results = repo_manager.result()
    surface_path = output_path(cfg, IV_SURFACE_FILE_NAME)
    paths_path = output_path(cfg, VARIANCE_PATHS_FILE_NAME)
    results.write_frame(surface_path, surface)
    results.write_frame(paths_path, paths)
    return [surface_path, paths_path]
