# CSVの具象連鎖リポジトリ
#
# chain.csv   chain,iteration,burn_in,<パラメーター> (1行が1反復)
# latent.csv  chain,iteration,t,V,J,Zy,Zv (間引いた潜在変数の縦持ち、tは0からT)
# summary.json 事後分布の要約

import os
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from jumpvol.domain.models.mcmc import PosteriorChain, PosteriorSummary
from jumpvol.domain.models.svcj import SVCJ_PARAMETER_NAMES
from jumpvol.domain.repositories.chains import ChainRepository
from jumpvol.infra.repositories.csv.results import ResultRepositoryImpl

CHAIN_FILE_NAME = "chain.csv"
LATENT_FILE_NAME = "latent.csv"
SUMMARY_FILE_NAME = "summary.json"

# 配列を持つ要約の属性
_SUMMARY_ARRAYS = [
    "jump_probability",
    "detected_jumps",
    "variance_path",
    "jump_size_y",
    "jump_size_v",
]


def chain_frame(chains: List[PosteriorChain]) -> pd.DataFrame:
    """連鎖を1行1反復のデータフレームに変換する。

    Args:
        chains (List[PosteriorChain]): 連鎖

    Returns:
        pd.DataFrame: chain、iteration、burn_in、パラメーターの列を持つデータフレーム
    """
    frames = []
    for k, chain in enumerate(chains):
        frame = chain.draws[SVCJ_PARAMETER_NAMES].copy()
        frame.insert(0, "burn_in", (frame.index < chain.config.burn_in).astype(int))
        frame.insert(0, "iteration", frame.index)
        frame.insert(0, "chain", k)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def latent_frame(chains: List[PosteriorChain]) -> pd.DataFrame:
    """間引いた潜在変数を縦持ちのデータフレームに変換する。

    JとZy、Zvは最後の時点 (t = T) で欠損値になる。

    Args:
        chains (List[PosteriorChain]): 連鎖

    Returns:
        pd.DataFrame: chain、iteration、t、V、J、Zy、Zvの列を持つデータフレーム
    """
    frames = []
    for k, chain in enumerate(chains):
        for iteration, latent in chain.latent_draws:
            horizon = len(latent)
            frames.append(
                pd.DataFrame(
                    {
                        "chain": k,
                        "iteration": iteration,
                        "t": np.arange(horizon + 1),
                        "V": latent.V,
                        "J": np.append(latent.J.astype(float), np.nan),
                        "Zy": np.append(latent.Zy, np.nan),
                        "Zv": np.append(latent.Zv, np.nan),
                    }
                )
            )
    columns = ["chain", "iteration", "t", "V", "J", "Zy", "Zv"]
    if not frames:
        return pd.DataFrame(columns=columns)
    return pd.concat(frames, ignore_index=True)[columns]


def summary_payload(
    chains: List[PosteriorChain], summary: PosteriorSummary
) -> Dict[str, Any]:
    """事後分布の要約をJSONに保存する辞書に変換する。

    Args:
        chains (List[PosteriorChain]): 連鎖
        summary (PosteriorSummary): 事後分布の要約

    Returns:
        Dict[str, Any]: 辞書
    """
    payload: Dict[str, Any] = {
        "flavor": chains[0].flavor.value if chains else None,
        "chains": len(chains),
        "mean": summary.mean,
        "std": summary.std,
        "quantile_025": summary.quantile_025,
        "quantile_975": summary.quantile_975,
        "mse": summary.mse,
        "derived": summary.derived,
        "acceptance_rates": [chain.acceptance_rates for chain in chains],
    }
    for name in _SUMMARY_ARRAYS:
        payload[name] = getattr(summary, name)
    return payload


class ChainRepositoryImpl(ChainRepository):
    """CSVの連鎖リポジトリ"""

    def __init__(self) -> None:
        """イニシャライザ"""
        super().__init__()
        self.results = ResultRepositoryImpl()

    def save(
        self, directory: str, chains: List[PosteriorChain], summary: PosteriorSummary
    ) -> List[str]:
        """連鎖と要約を保存する。

        Args:
            directory (str): 保存先のディレクトリ
            chains (List[PosteriorChain]): 連鎖
            summary (PosteriorSummary): 事後分布の要約

        Returns:
            List[str]: 保存したファイルのパス
        """
        os.makedirs(directory, exist_ok=True)
        chain_path = os.path.join(directory, CHAIN_FILE_NAME)
        latent_path = os.path.join(directory, LATENT_FILE_NAME)
        summary_path = os.path.join(directory, SUMMARY_FILE_NAME)
        self.results.write_frame(chain_path, chain_frame(chains))
        self.results.write_frame(latent_path, latent_frame(chains))
        self.results.write_json(summary_path, summary_payload(chains, summary))
        return [chain_path, latent_path, summary_path]

    def load_summary(self, directory: str) -> PosteriorSummary:
        """事後分布の要約を読み込む。

        Args:
            directory (str): 保存先のディレクトリ

        Returns:
            PosteriorSummary: 事後分布の要約
        """
        payload = self.results.read_json(os.path.join(directory, SUMMARY_FILE_NAME))

        def nan_for_none(value: Any) -> float:
            return float("nan") if value is None else float(value)

        arrays = {
            name: np.array([nan_for_none(v) for v in payload[name]])
            for name in _SUMMARY_ARRAYS
        }
        arrays["detected_jumps"] = arrays["detected_jumps"].astype(np.int8)
        return PosteriorSummary(
            mean=payload["mean"],
            std=payload["std"],
            quantile_025=payload["quantile_025"],
            quantile_975=payload["quantile_975"],
            mse=nan_for_none(payload["mse"]),
            derived=payload["derived"],
            **arrays,
        )
