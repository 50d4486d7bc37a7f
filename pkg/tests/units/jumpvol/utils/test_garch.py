import math
import unittest

import numpy as np
from scipy.integrate import quad

from jumpvol.common import RngStream
from jumpvol.common.errors import DegenerateInputError
from jumpvol.domain.models.baselines import TEgarchParams, TGarchParams
from jumpvol.utils.garch import (
    egarch_filter,
    expected_abs_t,
    expected_abs_t_quad,
    fit_tegarch,
    fit_tgarch,
    garch_filter,
    params_from_report,
    simulate_tegarch,
    simulate_tgarch,
    standardized_t_logpdf,
    tgarch_loglik,
)

# 日次リターン (小数単位) を想定した真のパラメーター
TGARCH_TRUTH = TGarchParams(omega=2e-5, alpha1=0.1, beta1=0.85, nu=5.0, mu=0.001)


class StandardizedTTest(unittest.TestCase):
    """標準化したt分布テストクラス"""

    def test_expected_abs_matches_quadrature(self) -> None:
        """E|Z|の解析解が数値積分と一致することを確認"""
        # 実行
        sut = expected_abs_t(5.0)

        # 検証
        self.assertAlmostEqual(expected_abs_t_quad(5.0), sut, places=8)

    def test_expected_abs_approaches_normal(self) -> None:
        """自由度が大きい場合にE|Z|が正規分布の値に近づくことを確認"""
        # 実行
        sut = expected_abs_t(500.0)

        # 検証
        self.assertAlmostEqual(math.sqrt(2.0 / math.pi), sut, places=3)

    def test_density_has_unit_variance(self) -> None:
        """密度の積分が1、分散が1になることを確認"""
        # 準備
        nu = 6.0

        def density(z: float) -> float:
            return math.exp(standardized_t_logpdf(np.array([z]), nu)[0])

        # 実行
        mass, _ = quad(density, -np.inf, np.inf)
        variance, _ = quad(lambda z: z * z * density(z), -np.inf, np.inf)

        # 検証
        self.assertAlmostEqual(1.0, mass, places=8)
        self.assertAlmostEqual(1.0, variance, places=6)


class FilterTest(unittest.TestCase):
    """条件付き分散の再帰計算テストクラス"""

    def test_garch_filter_matches_recursion(self) -> None:
        """GARCHの条件付き分散が再帰式と一致することを確認"""
        # 準備
        e = RngStream(1).generator().standard_normal(50) * 0.02
        params = TGarchParams(omega=1e-5, alpha1=0.1, beta1=0.8, nu=5.0)

        # 実行
        sut = garch_filter(params, e, initial=4e-4)

        # 検証
        expected = [4e-4]
        for t in range(1, 50):
            expected.append(1e-5 + 0.1 * e[t - 1] ** 2 + 0.8 * expected[-1])
        np.testing.assert_allclose(expected, sut, rtol=1e-12)

    def test_egarch_without_shocks_is_constant(self) -> None:
        """alpha1 = phi1 = 0の場合に条件付き分散が一定になることを確認"""
        # 準備
        e = RngStream(2).generator().standard_normal(30)
        params = TEgarchParams(omega=-1.0, alpha1=0.0, beta1=0.5, phi1=0.0, nu=5.0)

        # 実行
        sut = egarch_filter(params, e)

        # 検証
        np.testing.assert_allclose(math.exp(-2.0), sut, rtol=1e-12)


class FitTGarchTest(unittest.TestCase):
    """t-GARCHの推定テストクラス"""

    @classmethod
    def setUpClass(cls) -> None:
        """シミュレーションしたリターンでt-GARCHを推定する。"""
        cls.returns = simulate_tgarch(TGARCH_TRUTH, 3000, RngStream(2024))
        cls.params, cls.report = fit_tgarch(cls.returns)

    def test_recovers_truth(self) -> None:
        """真のパラメーターを標準誤差の範囲で再現することを確認"""
        # 準備
        sut = self.report

        # 検証
        for name in ["alpha1", "beta1"]:
            with self.subTest(name=name):
                estimate = sut.estimates[name]
                se = sut.std_errors[name]
                self.assertLess(abs(estimate - getattr(TGARCH_TRUTH, name)), 3.0 * se)
        self.assertGreater(self.params.nu, 3.0)
        self.assertLess(self.params.nu, 12.0)

    def test_loglik_is_on_original_scale(self) -> None:
        """報告する対数尤度が元の尺度の対数尤度と一致することを確認"""
        # 実行
        sut = tgarch_loglik(self.params, self.returns)

        # 検証
        self.assertAlmostEqual(self.report.loglik, sut, delta=1e-6 * abs(sut))

    def test_scale_invariance(self) -> None:
        """リターンを10倍するとomegaが100倍、その他は変わらないことを確認"""
        # 実行
        sut, _ = fit_tgarch(self.returns * 10.0)

        # 検証
        self.assertAlmostEqual(self.params.alpha1, sut.alpha1, places=4)
        self.assertAlmostEqual(self.params.beta1, sut.beta1, places=4)
        ratio = sut.omega / (100.0 * self.params.omega)
        self.assertAlmostEqual(1.0, ratio, places=3)

    def test_report_payload(self) -> None:
        """推定値、標準誤差、情報量規準を平坦な辞書にまとめることを確認"""
        # 実行
        sut = params_from_report(self.report)

        # 検証
        for key in ["mu", "omega_se", "nu", "loglik", "aic", "bic", "nobs"]:
            self.assertIn(key, sut)
        self.assertEqual(3000, sut["nobs"])
        self.assertEqual(3000, len(self.report.residuals))

    def test_can_not_fit_constant_returns(self) -> None:
        """リターンが一定の場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(DegenerateInputError):
            _ = fit_tgarch(np.full(600, 0.01))


class FitTEgarchTest(unittest.TestCase):
    """t-EGARCHの推定テストクラス"""

    def test_fit_simulated_returns(self) -> None:
        """シミュレーションしたリターンを推定できることを確認"""
        # 準備
        truth = TEgarchParams(
            omega=-0.4, alpha1=-0.05, beta1=0.95, phi1=0.2, nu=6.0, mu=0.0
        )
        returns = simulate_tegarch(truth, 2000, RngStream(7))

        # 実行
        sut, report = fit_tegarch(returns)

        # 検証
        self.assertTrue(np.isfinite(report.loglik))
        self.assertLess(abs(sut.beta1 - truth.beta1), 0.05)
        self.assertGreater(sut.phi1, 0.0)
        self.assertEqual(2000, len(report.residuals))

    def test_few_observations_are_warned(self) -> None:
        """観測数が少ない場合に警告を出力することを確認"""
        # 準備
        returns = RngStream(3).generator().standard_normal(100) * 0.02

        # 実行と検証
        with self.assertLogs("jumpvol.utils.garch", level="WARNING"):
            _ = fit_tegarch(returns)
