import math
import unittest
from dataclasses import replace

import numpy as np

from jumpvol.domain.models.br import REFERENCE_BR_PARAMS
from jumpvol.domain.models.svcj import REFERENCE_SVCJ_PARAMS
from jumpvol.utils.units import (
    br_returns_to_decimal,
    br_sigma0,
    svcj_to_decimal,
    variance_to_decimal,
)


class UnitsTest(unittest.TestCase):
    """単位変換テストクラス"""

    def test_svcj_to_decimal(self) -> None:
        """SVCJパラメーターを次元に応じて変換することを確認"""
        # 実行
        sut = svcj_to_decimal(REFERENCE_SVCJ_PARAMS)

        # 検証
        self.assertAlmostEqual(0.041 / 100, sut.mu)
        self.assertAlmostEqual(2.155 / 100, sut.sigma_y)
        self.assertAlmostEqual(0.010 / 1e4, sut.alpha)
        self.assertAlmostEqual(0.620 / 1e4, sut.mu_v)
        self.assertAlmostEqual(-57.3, sut.rho_j)
        self.assertEqual(REFERENCE_SVCJ_PARAMS.beta, sut.beta)
        self.assertEqual(REFERENCE_SVCJ_PARAMS.rho, sut.rho)
        self.assertEqual(REFERENCE_SVCJ_PARAMS.lam, sut.lam)

    def test_long_run_variance_scales_by_ten_thousand(self) -> None:
        """分散の長期平均が1/10000になることを確認"""
        # 実行
        sut = svcj_to_decimal(REFERENCE_SVCJ_PARAMS)

        # 検証
        self.assertAlmostEqual(
            variance_to_decimal(REFERENCE_SVCJ_PARAMS.long_run_variance()),
            sut.long_run_variance(),
            places=15,
        )

    def test_br_returns_to_decimal(self) -> None:
        """BRリターンが1/100になることを確認"""
        # 実行
        sut = br_returns_to_decimal(np.array([1.0, -2.0]))

        # 検証
        np.testing.assert_allclose([0.01, -0.02], sut)

    def test_br_sigma0(self) -> None:
        """初期スポット・ボラティリティが対数分散の長期平均から決まることを確認"""
        # 準備
        level = REFERENCE_BR_PARAMS.long_run_log_variance()

        # 実行
        sut = br_sigma0(REFERENCE_BR_PARAMS, 1.0)
        fallback = br_sigma0(replace(REFERENCE_BR_PARAMS, m1=0.0), 3.0)

        # 検証
        self.assertAlmostEqual(math.exp(0.5 * level), sut)
        self.assertEqual(3.0, fallback)
