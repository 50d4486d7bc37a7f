import unittest

import numpy as np

from jumpvol.common import RngStream
from jumpvol.domain.models.mcmc import McmcConfig, PriorSpec
from jumpvol.domain.models.svcj import (
    REFERENCE_SVCJ_PARAMS,
    SVCJ_PARAMETER_NAMES,
    ModelFlavor,
)
from jumpvol.utils.diagnostics import detect_jumps
from jumpvol.utils.simulation import simulate_svcj
from jumpvol.utils.svcj_sampler import fit_svcj, summarize

from tests.acceptance import acceptance


@acceptance
class SvcjRecoveryTest(unittest.TestCase):
    """SVCJモデルのシミュレーションからの推定の受け入れテスト"""

    @classmethod
    def setUpClass(cls) -> None:  # noqa: D102
        v0 = REFERENCE_SVCJ_PARAMS.long_run_variance()
        cls.returns, _ = simulate_svcj(
            REFERENCE_SVCJ_PARAMS, ModelFlavor.SVCJ, v0, 2000, RngStream(2024)
        )
        cls.summaries = {}
        for k, flavor in enumerate(ModelFlavor):
            cfg = McmcConfig(seed=RngStream(2024, 1).substream(k))
            chain = fit_svcj(cls.returns, flavor, PriorSpec(), cfg)
            cls.summaries[flavor] = (chain, summarize([chain], cls.returns))

    def test_intervals_contain_truth(self) -> None:
        """10個中8個以上の真のパラメーターが95%信用区間に含まれることを確認"""
        # 準備
        _, sut = self.summaries[ModelFlavor.SVCJ]

        # 実行
        covered = [
            name
            for name in SVCJ_PARAMETER_NAMES
            if sut.interval_contains(name, getattr(REFERENCE_SVCJ_PARAMS, name))
        ]

        # 検証
        self.assertGreaterEqual(len(covered), 8, covered)
        lam = sut.mean["lam"]
        self.assertAlmostEqual(REFERENCE_SVCJ_PARAMS.lam, lam, delta=0.02)

    def test_acceptance_rates(self) -> None:
        """適応後の採択率が0.15から0.6の間にあることを確認"""
        # 準備
        sut, _ = self.summaries[ModelFlavor.SVCJ]

        # 実行と検証
        for name, rate in sut.acceptance_rates.items():
            with self.subTest(block=name):
                self.assertTrue(0.15 <= rate <= 0.6, rate)

    def test_flavor_ordering(self) -> None:
        """SVCJ、SVJ、SVの順に平均二乗誤差が小さいことを確認"""
        # 実行
        sut = {flavor: s.mse for flavor, (_, s) in self.summaries.items()}

        # 検証
        self.assertLessEqual(sut[ModelFlavor.SVCJ], sut[ModelFlavor.SVJ])
        self.assertLessEqual(sut[ModelFlavor.SVJ], sut[ModelFlavor.SV])

    def test_jump_detection_matches_intensity(self) -> None:
        """判定したジャンプの割合が事後平均のジャンプ強度に近いことを確認"""
        # 準備
        _, summary = self.summaries[ModelFlavor.SVCJ]

        # 実行
        sut = detect_jumps(summary.jump_probability, summary.mean["lam"])

        # 検証
        fraction = float(np.mean(sut))
        self.assertAlmostEqual(summary.mean["lam"], fraction, delta=0.01)


@acceptance
class SvOnlyDataTest(unittest.TestCase):
    """ジャンプのないデータの受け入れテスト"""

    def test_intensity_shrinks_on_jump_free_data(self) -> None:
        """ジャンプのないデータではジャンプ強度の事後平均が事前平均より小さいことを確認"""
        # 準備
        params = REFERENCE_SVCJ_PARAMS.restricted(ModelFlavor.SV)
        returns, _ = simulate_svcj(
            params, ModelFlavor.SV, params.long_run_variance(), 2000, RngStream(7)
        )
        priors = PriorSpec()
        cfg = McmcConfig(seed=RngStream(8))

        # 実行
        chain = fit_svcj(returns, ModelFlavor.SVCJ, priors, cfg)
        sut = summarize([chain], returns)

        # 検証
        self.assertLess(sut.mean["lam"], priors.lam_mean)
        self.assertLess(sut.quantile_025["lam"], 0.01)
