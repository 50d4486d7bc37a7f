import unittest

import numpy as np
from scipy import stats

from jumpvol.common import RngStream
from jumpvol.common.errors import DegenerateInputError, InvalidInputError
from jumpvol.domain.models.baselines import ArimaParams
from jumpvol.utils.arima import (
    arma_forecast,
    arma_residuals,
    fit_arima,
    ljung_box,
    simulate_arma,
)


class ArmaResidualsTest(unittest.TestCase):
    """条件付き残差テストクラス"""

    def test_ar_residuals(self) -> None:
        """AR(1)の残差がx_t - c - a * x_{t-1}になることを確認"""
        # 準備
        x = np.array([1.0, 2.0, 0.5, -1.0])

        # 実行
        sut = arma_residuals(x, 0.1, np.array([0.5]), np.array([]))

        # 検証
        expected = [2.0 - 0.1 - 0.5, 0.5 - 0.1 - 1.0, -1.0 - 0.1 - 0.25]
        np.testing.assert_allclose(expected, sut)

    def test_ma_residuals_start_from_zero(self) -> None:
        """MA(1)の残差が初期の残差を0として再帰的に求まることを確認"""
        # 準備
        x = np.array([1.0, 2.0, 3.0])

        # 実行
        sut = arma_residuals(x, 0.0, np.array([]), np.array([0.5]))

        # 検証
        np.testing.assert_allclose([1.0, 1.5, 2.25], sut)


class FitArimaTest(unittest.TestCase):
    """ARMAの推定テストクラス"""

    def test_recovers_ar_coefficient(self) -> None:
        """シミュレーションしたAR(1)の係数を再現することを確認"""
        # 準備
        truth = ArimaParams(0.001, np.array([0.4]), np.array([]), 1e-4)
        x = simulate_arma(truth, 2000, RngStream(8))

        # 実行
        sut, report = fit_arima(x, 1, 0)

        # 検証
        self.assertLess(abs(sut.a[0] - 0.4), 3.0 * report.std_errors["a1"])
        self.assertAlmostEqual(1e-4, sut.sigma2, delta=1e-5)
        self.assertEqual(1999, report.nobs)
        self.assertTrue(report.converged)
        self.assertEqual(["c", "a1", "sigma2"], list(report.estimates))

    def test_arma_names(self) -> None:
        """ARMA(2, 2)のパラメーター名を確認"""
        # 準備
        x = RngStream(1).generator().standard_normal(500) * 0.02

        # 実行
        sut, report = fit_arima(x, 2, 2)

        # 検証
        self.assertEqual(
            ["c", "a1", "a2", "b1", "b2", "sigma2"], list(report.estimates)
        )
        self.assertEqual(2, sut.p)
        self.assertEqual(2, sut.q)

    def test_can_not_fit_with_too_few_observations(self) -> None:
        """次数に対して観測数が少ない場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = fit_arima(np.arange(30, dtype=float), 2, 2)

    def test_can_not_fit_with_negative_order(self) -> None:
        """次数が負の場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = fit_arima(np.arange(300, dtype=float), -1, 0)

    def test_can_not_fit_constant_series(self) -> None:
        """系列が一定の場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(DegenerateInputError):
            _ = fit_arima(np.ones(300), 1, 0)


class ArmaForecastTest(unittest.TestCase):
    """ARMAの予測テストクラス"""

    def test_ar_forecast(self) -> None:
        """AR(1)の予測がc + a * x_Tを繰り返した値になることを確認"""
        # 準備
        params = ArimaParams(1.0, np.array([0.5]), np.array([]), 1.0)

        # 実行
        sut = arma_forecast(params, np.array([0.0, 4.0]), 2)

        # 検証
        np.testing.assert_allclose([3.0, 2.5], sut)

    def test_ma_forecast_uses_last_residual(self) -> None:
        """MA(1)の1期先予測がc + b * e_Tになることを確認"""
        # 準備
        params = ArimaParams(0.0, np.array([]), np.array([0.5]), 1.0)

        # 実行
        sut = arma_forecast(params, np.array([1.0, 2.0, 3.0]), 2)

        # 検証
        np.testing.assert_allclose([1.125, 0.0], sut)


class LjungBoxTest(unittest.TestCase):
    """Ljung-Box検定テストクラス"""

    def test_white_noise_is_not_rejected(self) -> None:
        """ホワイトノイズで帰無仮説を棄却しないことを確認"""
        # 準備
        x = RngStream(3).generator().standard_normal(1000)

        # 実行
        _, p_value = ljung_box(x, 10)

        # 検証
        self.assertGreater(p_value, 0.01)

    def test_autocorrelation_is_rejected(self) -> None:
        """自己相関のある系列で帰無仮説を棄却することを確認"""
        # 準備
        x = simulate_arma(
            ArimaParams(0.0, np.array([0.5]), np.array([]), 1.0), 1000, RngStream(4)
        )

        # 実行
        statistic, p_value = ljung_box(x, 10)

        # 検証
        self.assertGreater(statistic, 100.0)
        self.assertLess(p_value, 1e-6)

    def test_p_values_are_uniform_under_null(self) -> None:
        """独立な正規乱数でp値が一様分布に従うことを確認"""
        # 準備
        base = RngStream(5)

        # 実行
        p_values = [
            ljung_box(base.substream(i).generator().standard_normal(500), 10)[1]
            for i in range(1000)
        ]

        # 検証
        self.assertLess(stats.kstest(p_values, "uniform").statistic, 0.06)

    def test_can_not_test_with_invalid_lags(self) -> None:
        """ラグ数が不正な場合に例外を発生することを確認"""
        # 準備
        x = np.arange(40, dtype=float)

        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = ljung_box(x, 0)
        with self.assertRaises(InvalidInputError):
            _ = ljung_box(x, 10)

    def test_can_not_test_constant_residuals(self) -> None:
        """残差が一定の場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(DegenerateInputError):
            _ = ljung_box(np.ones(100), 5)
