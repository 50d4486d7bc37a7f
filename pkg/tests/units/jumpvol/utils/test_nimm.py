import unittest
from dataclasses import replace

import numpy as np

from jumpvol.common import RngStream
from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.br import (
    BR_PARAMETER_NAMES,
    COJUMP_NAMES,
    REFERENCE_BR_PARAMS,
    NimmConfig,
    Restriction,
)
from jumpvol.domain.models.intraday import CrossMomentEstimate
from jumpvol.utils.highfreq import REQUIRED_ORDERS
from jumpvol.utils.nimm import (
    draw_common_uniforms,
    model_cross_moments,
    moment_weights,
    nimm_calibrate,
)

GRID = np.array([0.5, 0.8, 1.0, 1.3, 1.8])

TRUTH = REFERENCE_BR_PARAMS.without_jumps()


def _config(**kwargs: object) -> NimmConfig:
    values = {"reps": 2000, "substeps": 4, "seed": RngStream(11), "restarts": 1}
    values.update(kwargs)
    return NimmConfig(**values)


def _moments(config: NimmConfig) -> dict:
    """真のパラメーターから共通乱数で求めた交差モーメントを返す。"""
    uniforms = draw_common_uniforms(
        config.reps, config.substeps, config.seed.substream(0)
    )
    model = model_cross_moments(TRUTH, GRID, REQUIRED_ORDERS, uniforms)
    return {
        order: CrossMomentEstimate(
            order[0], order[1], GRID, values, np.full(len(GRID), 0.1), 0.2
        )
        for order, values in model.items()
    }


class ModelCrossMomentsTest(unittest.TestCase):
    """モデルの交差モーメントテストクラス"""

    def test_diffusion_moments(self) -> None:
        """拡散だけのモデルで1次と2次のモーメントがドリフトと分散になることを確認"""
        # 準備
        params = replace(TRUTH, m0=0.0, m1=0.0, Lambda=0.0, rho0=0.0, rho1=0.0)
        uniforms = draw_common_uniforms(20000, 4, RngStream(1))
        orders = [(1, 0), (2, 0), (0, 1)]

        # 実行
        sut = model_cross_moments(params, GRID, orders, uniforms)

        # 検証
        np.testing.assert_allclose(GRID**2, sut[(2, 0)], rtol=0.05)
        np.testing.assert_allclose(params.mu_r, sut[(1, 0)], atol=0.05)
        np.testing.assert_allclose(0.0, sut[(0, 1)], atol=1e-12)

    def test_common_uniforms_make_moments_deterministic(self) -> None:
        """同じ共通乱数から同じ交差モーメントを得ることを確認"""
        # 準備
        uniforms = draw_common_uniforms(500, 4, RngStream(2))

        # 実行
        first = model_cross_moments(
            REFERENCE_BR_PARAMS, GRID, REQUIRED_ORDERS, uniforms
        )
        second = model_cross_moments(
            REFERENCE_BR_PARAMS, GRID, REQUIRED_ORDERS, uniforms
        )

        # 検証
        for order in REQUIRED_ORDERS:
            np.testing.assert_array_equal(first[order], second[order])


class MomentWeightsTest(unittest.TestCase):
    """重みテストクラス"""

    def test_missing_points_have_zero_weight(self) -> None:
        """欠損した評価点の重みが0、その他が分散の逆数になることを確認"""
        # 準備
        estimate = CrossMomentEstimate(
            2,
            0,
            np.array([1.0, 2.0, 3.0]),
            np.array([1.0, np.nan, 1.0]),
            np.array([0.5, np.nan, 0.25]),
            0.1,
        )

        # 実行
        sut = moment_weights(estimate, 0.0)

        # 検証
        np.testing.assert_allclose([4.0, 0.0, 16.0], sut)

    def test_small_variances_are_floored(self) -> None:
        """分散を分位点で下から抑えることを確認"""
        # 準備
        estimate = CrossMomentEstimate(
            2, 0, np.array([1.0, 2.0]), np.ones(2), np.array([1e-6, 1.0]), 0.1
        )

        # 実行
        sut = moment_weights(estimate, 1.0)

        # 検証
        np.testing.assert_allclose([1.0, 1.0], sut)


class NimmCalibrateTest(unittest.TestCase):
    """NIMMによる推定テストクラス"""

    def test_recovers_free_parameters(self) -> None:
        """共通乱数で求めた交差モーメントから真のパラメーターを再現することを確認"""
        # 準備
        free = ["mu_r", "Lambda"]
        config = _config(
            fixed=tuple(n for n in BR_PARAMETER_NAMES if n not in free),
            max_iterations=400,
        )
        init = replace(TRUTH, mu_r=0.05, Lambda=0.5)

        # 実行
        params, sut = nimm_calibrate(_moments(config), init, Restriction.Full, config)

        # 検証
        self.assertEqual(free, sut.free)
        self.assertLess(sut.objective, sut.initial_objective)
        self.assertAlmostEqual(TRUTH.Lambda, params.Lambda, delta=0.05 * TRUTH.Lambda)
        self.assertAlmostEqual(TRUTH.mu_r, params.mu_r, delta=0.01)
        self.assertFalse(sut.returned_initial)
        self.assertEqual(TRUTH.m0, params.m0)
        expected = {f"{p1},{p2}" for p1, p2 in REQUIRED_ORDERS}
        self.assertEqual(expected, set(sut.contributions))

    def test_restriction_pins_cojumps(self) -> None:
        """共通ジャンプなしの制約で共通ジャンプのパラメーターが0になることを確認"""
        # 準備
        config = _config(fixed=tuple(BR_PARAMETER_NAMES), max_iterations=10)

        # 実行
        params, sut = nimm_calibrate(
            _moments(config), REFERENCE_BR_PARAMS, Restriction.NoCojumps, config
        )

        # 検証
        self.assertEqual([], sut.free)
        self.assertTrue(sut.converged)
        for name in COJUMP_NAMES:
            self.assertEqual(0.0, getattr(params, name))

    def test_initial_point_is_returned_when_not_improved(self) -> None:
        """初期値で目的関数が最小の場合に初期値を返したと報告することを確認"""
        # 準備
        free = ["mu_r", "Lambda"]
        config = _config(
            fixed=tuple(n for n in BR_PARAMETER_NAMES if n not in free),
            max_iterations=50,
        )

        # 実行
        params, sut = nimm_calibrate(_moments(config), TRUTH, Restriction.Full, config)

        # 検証
        self.assertEqual(0.0, sut.initial_objective)
        self.assertEqual(0.0, sut.objective)
        self.assertTrue(sut.returned_initial)
        self.assertEqual(TRUTH.Lambda, params.Lambda)
        self.assertEqual(TRUTH.mu_r, params.mu_r)

    def test_can_not_calibrate_without_required_orders(self) -> None:
        """必要な次数の交差モーメントがない場合に例外を発生することを確認"""
        # 準備
        config = _config()
        moments = _moments(config)
        del moments[(4, 0)]

        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = nimm_calibrate(moments, TRUTH, Restriction.Full, config)

    def test_can_not_calibrate_with_mismatched_grids(self) -> None:
        """評価点が一致しない場合に例外を発生することを確認"""
        # 準備
        config = _config()
        moments = _moments(config)
        m = moments[(2, 0)]
        moments[(2, 0)] = replace(m, sigma_grid=m.sigma_grid + 0.01)

        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = nimm_calibrate(moments, TRUTH, Restriction.Full, config)

    def test_can_not_calibrate_from_svcj_params(self) -> None:
        """初期値がBRパラメーターでない場合に例外を発生することを確認"""
        # 準備
        config = _config()

        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = nimm_calibrate(_moments(config), object(), Restriction.Full, config)
