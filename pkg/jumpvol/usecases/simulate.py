import logging
from dataclasses import fields
from typing import List

from jumpvol.domain.models.runs import RunConfig, SimulateSection
from jumpvol.domain.models.svcj import SVCJ_PARAMETER_NAMES, SvcjParams
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.usecases.inputs import SIMULATED_FILE_NAME, output_path, stage_stream
from jumpvol.utils.simulation import simulate_svcj

logger = logging.getLogger(__name__)


def simulation_params(section: SimulateSection) -> SvcjParams:
    """シミュレーションの設定からパーセント単位のパラメーターを構築する。

    Args:
        section (SimulateSection): シミュレーションの設定

    Returns:
        SvcjParams: パラメーター
    """
    values = {f.name: getattr(section, f.name) for f in fields(section)}
    return SvcjParams.from_dict({name: values[name] for name in SVCJ_PARAMETER_NAMES})


def simulate_returns(repo_manager: RepositoryManager, cfg: RunConfig) -> List[str]:
    """SVCJモデルのリターンをシミュレーションして保存する。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Returns:
        List[str]: 保存したファイルのパス
    """
    section = cfg.simulate
    params = simulation_params(section).restricted(section.flavor)
    v0 = params.long_run_variance() if section.v0 is None else section.v0
    returns, latent = simulate_svcj(
        params, section.flavor, v0, section.horizon, stage_stream(cfg, "simulate")
    )
    path = output_path(cfg, SIMULATED_FILE_NAME)
    repo_manager.price_series().save_returns(path, returns, latent)
    logger.info(
        "%sモデルのリターンをシミュレーションしました (horizon=%d, jumps=%d)。",
        section.flavor.value,
        section.horizon,
        int(latent.J.sum()),
    )
    return [path]
