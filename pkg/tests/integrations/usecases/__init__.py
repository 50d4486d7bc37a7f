from dataclasses import replace

import numpy as np
import pandas as pd

from jumpvol.domain.models.runs import (
    CoreSection,
    HighfreqSection,
    McmcSection,
    PricingSection,
    RunConfig,
    SimulateSection,
)

from tests.integrations import IntegrationTestCase


class UsecaseTestCase(IntegrationTestCase):
    """ユースケースの統合テストクラス

    出力ディレクトリをテスト用ディレクトリにした、計算量の小さい実行設定を持つ。
    """

    # 実行設定
    cfg: RunConfig

    def setUp(self) -> None:  # noqa: D102
        result = super().setUp()
        self.cfg = RunConfig(
            core=CoreSection(output_dir=self.work_dir, seed=3),
            simulate=SimulateSection(horizon=300),
            mcmc=McmcSection(iterations=40, burn_in=10, latent_thin=10),
            highfreq=HighfreqSection(
                grid_points=8, reps=300, restarts=1, max_iterations=20
            ),
            pricing=replace(
                PricingSection(),
                paths=2000,
                strikes=[2000.0, 2250.0, 2500.0],
                taus=[7, 30],
                moneyness=[0.9, 1.0, 1.1],
                surface_taus=[7, 30],
            ),
        )
        return result

    def write_intraday(self, days: int = 30, seed: int = 0) -> str:
        """日ごとにボラティリティが変わる60秒間隔の価格ファイルを作成する。

        Args:
            days (int): 日数
            seed (int): 乱数シード

        Returns:
            str: ファイルのパス
        """
        rng = np.random.default_rng(seed)
        daily_vol = 0.01 * np.exp(0.3 * rng.standard_normal(days))
        minute_vol = np.repeat(daily_vol / np.sqrt(1440.0), 1440)
        returns = minute_vol * rng.standard_normal(days * 1440)
        prices = 100.0 * np.exp(np.concatenate([[0.0], np.cumsum(returns)]))
        timestamps = pd.date_range("2024-01-01", periods=len(prices), freq="min")
        path = self.path("intraday.csv")
        pd.DataFrame({"timestamp": timestamps, "price": prices}).to_csv(
            path, index=False
        )
        return path
