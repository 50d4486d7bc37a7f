import unittest

import numpy as np

from jumpvol.utils.likelihood import (
    numerical_hessian,
    numerical_scores,
    sandwich_covariance,
)

X = np.array([0.3, -1.2, 0.8, 2.1, -0.4, 0.0, 1.5])


def _normal_mean_terms(theta: np.ndarray) -> np.ndarray:
    return -0.5 * (X - theta[0]) ** 2


class SandwichCovarianceTest(unittest.TestCase):
    """ロバストな共分散行列テストクラス"""

    def test_scores_and_hessian_of_normal_mean(self) -> None:
        """正規分布の平均のスコアとヘッセ行列を確認"""
        # 準備
        theta = np.array([0.5])

        # 実行
        scores = numerical_scores(_normal_mean_terms, theta)
        hessian = numerical_hessian(_normal_mean_terms, theta)

        # 検証
        np.testing.assert_allclose(X - 0.5, scores[:, 0], rtol=1e-6)
        self.assertAlmostEqual(-len(X), hessian[0, 0], places=3)

    def test_normal_mean(self) -> None:
        """正規分布の平均の分散が残差平方和を観測数の2乗で割った値になることを確認"""
        # 準備
        mean = float(np.mean(X))
        expected = float(np.sum((X - mean) ** 2)) / len(X) ** 2

        # 実行
        sut = sandwich_covariance(_normal_mean_terms, np.array([mean]))

        # 検証
        self.assertEqual((1, 1), sut.shape)
        self.assertAlmostEqual(expected, sut[0, 0], places=5)

    def test_singular_hessian_gives_nan(self) -> None:
        """ヘッセ行列が特異な場合にnanの行列を返すことを確認"""
        # 実行
        with self.assertLogs("jumpvol.utils.likelihood", level="WARNING"):
            sut = sandwich_covariance(_normal_mean_terms, np.array([0.1, 3.0]))

        # 検証
        self.assertEqual((2, 2), sut.shape)
        self.assertTrue(np.isnan(sut).all())
