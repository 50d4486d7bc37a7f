import unittest

import numpy as np

from jumpvol.common import RngStream
from jumpvol.domain.models.br import REFERENCE_BR_PARAMS
from jumpvol.domain.models.intraday import IntradayPanel
from jumpvol.utils.highfreq import (
    cross_moment_kernel,
    default_grid,
    spot_variance_tbv,
)
from jumpvol.utils.nimm import draw_common_uniforms, model_cross_moments
from jumpvol.utils.simulation import simulate_br

from tests.acceptance import acceptance

# 1分当たりのボラティリティ
MINUTE_VOL = 0.001

# 1日のノット数とノット当たりの分数
KNOTS = 24
MINUTES = 60


@acceptance
class ThresholdBipowerTest(unittest.TestCase):
    """閾値付きバイパワー変動の受け入れテスト"""

    def setUp(self) -> None:  # noqa: D102
        # 10008個の窓
        days = 417
        gen = RngStream(31).generator()
        self.returns = MINUTE_VOL * gen.standard_normal((days, KNOTS, MINUTES))
        self.jumped = (np.arange(days * KNOTS) % 10 == 0).reshape(days, KNOTS)
        self.truth = MINUTES * MINUTE_VOL**2

    def test_diffusion_bias(self) -> None:
        """拡散だけの場合に推定値の平均の相対誤差が5%未満であることを確認"""
        # 実行
        sut = spot_variance_tbv(IntradayPanel(self.returns))

        # 検証
        bias = np.mean(sut.sigma2_hat) / self.truth - 1.0
        self.assertLess(abs(bias), 0.05)

    def test_jump_robustness(self) -> None:
        """ジャンプがある窓で閾値付きの推定値だけが偏らないことを確認"""
        # 準備
        returns = self.returns.copy()
        returns[self.jumped, MINUTES // 2] += 10.0 * MINUTE_VOL

        # 実行
        spot = spot_variance_tbv(IntradayPanel(returns))
        realized = np.sum(returns**2, axis=2)

        # 検証
        tbv_bias = np.mean(spot.sigma2_hat[self.jumped]) / self.truth - 1.0
        rv_bias = np.mean(realized[self.jumped]) / self.truth - 1.0
        self.assertLess(abs(tbv_bias), 0.10)
        self.assertGreater(rv_bias, 0.50)


@acceptance
class CrossMomentConsistencyTest(unittest.TestCase):
    """交差モーメントの受け入れテスト"""

    def test_second_moment_of_jump_free_data(self) -> None:
        """ジャンプのないBRモデルの価格の2次のモーメントがモデルの値と一致することを確認"""
        # 準備
        params = REFERENCE_BR_PARAMS.without_jumps()
        days = 500
        sigma0 = float(np.exp(0.5 * params.long_run_log_variance()))
        returns, _ = simulate_br(
            params, sigma0, days * KNOTS * MINUTES, 1.0 / 1440.0, RngStream(41)
        )
        panel = IntradayPanel(returns.values.reshape(days, KNOTS, MINUTES))
        spot = spot_variance_tbv(panel)
        grid = default_grid(spot, 10)
        uniforms = draw_common_uniforms(20000, 20, RngStream(42))

        # 実行
        estimate = cross_moment_kernel(panel.closes(), spot, 2, 0, grid)
        model = model_cross_moments(params, grid, [(2, 0)], uniforms)[(2, 0)]

        # 検証
        valid = np.isfinite(estimate.theta_hat)
        self.assertGreaterEqual(int(valid.sum()), 8)
        np.testing.assert_allclose(
            model[valid], estimate.theta_hat[valid], rtol=0.10
        )
