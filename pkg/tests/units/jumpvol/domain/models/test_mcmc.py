import unittest

import numpy as np
import pandas as pd

from jumpvol.domain.models.mcmc import (
    McmcConfig,
    PosteriorChain,
    PosteriorSummary,
    PriorSpec,
)
from jumpvol.domain.models.svcj import (
    REFERENCE_SVCJ_PARAMS,
    SVCJ_PARAMETER_NAMES,
    ModelFlavor,
)


class PriorSpecTest(unittest.TestCase):
    """事前分布テストクラス"""

    def test_lam_mean(self) -> None:
        """ジャンプ強度の事前平均がBeta(2, 40)の平均になることを確認"""
        # 実行
        sut = PriorSpec()

        # 検証
        self.assertAlmostEqual(2.0 / 42.0, sut.lam_mean)

    def test_overridden(self) -> None:
        """一部のハイパーパラメーターだけを上書きできることを確認"""
        # 実行
        sut = PriorSpec().overridden({"mu_var": 4, "lam_b": 20.0})

        # 検証
        self.assertEqual(4.0, sut.mu_var)
        self.assertEqual(20.0, sut.lam_b)
        self.assertEqual(PriorSpec().sigma_y2_scale, sut.sigma_y2_scale)

    def test_can_not_override_unknown_hyperparameter(self) -> None:
        """存在しないハイパーパラメーターを上書きした場合に例外を発生することを確認"""
        # 準備
        sut = PriorSpec()

        # 実行と検証
        with self.assertRaises(ValueError):
            _ = sut.overridden({"kappa_mean": 1.0})

    def test_can_not_instantiate_with_non_positive_variance(self) -> None:
        """分散のハイパーパラメーターが正でない場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(ValueError):
            _ = PriorSpec(mu_var=0.0)


class McmcConfigTest(unittest.TestCase):
    """MCMCの設定テストクラス"""

    def test_can_not_instantiate_with_invalid_attributes(self) -> None:
        """不正な属性の場合に例外を発生することを確認"""
        # 準備
        invalid = [
            {"iterations": 100, "burn_in": 100},
            {"burn_in": -1},
            {"mh_target_accept": 1.0},
            {"latent_thin": 0},
        ]

        # 実行と検証
        for kwargs in invalid:
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(ValueError):
                    _ = McmcConfig(**kwargs)


class PosteriorTest(unittest.TestCase):
    """事後分布の連鎖と要約テストクラス"""

    def test_posterior_draws_discard_burn_in(self) -> None:
        """バーンイン後のパラメーターだけを返すことを確認"""
        # 準備
        draws = pd.DataFrame(
            np.arange(40, dtype=float).reshape(4, 10), columns=SVCJ_PARAMETER_NAMES
        )
        sut = PosteriorChain(
            flavor=ModelFlavor.SVCJ,
            config=McmcConfig(iterations=4, burn_in=1),
            draws=draws,
            latent_draws=[],
            acceptance_rates={},
            jump_probability=np.zeros(3),
            variance_mean=np.zeros(4),
            jump_size_y_mean=np.zeros(3),
            jump_size_v_mean=np.zeros(3),
        )

        # 実行
        actual = sut.posterior_draws()

        # 検証
        self.assertEqual(3, len(actual))
        self.assertEqual(10.0, actual.iloc[0]["mu"])

    def test_summary_interval_and_params(self) -> None:
        """信用区間の判定と事後平均のパラメーターを確認"""
        # 準備
        mean = REFERENCE_SVCJ_PARAMS.as_dict()
        sut = PosteriorSummary(
            mean=mean,
            std={k: 0.1 for k in mean},
            quantile_025={k: v - 0.2 for k, v in mean.items()},
            quantile_975={k: v + 0.2 for k, v in mean.items()},
            jump_probability=np.zeros(2),
            detected_jumps=np.zeros(2, dtype=np.int8),
            variance_path=np.ones(3),
            jump_size_y=np.zeros(2),
            jump_size_v=np.zeros(2),
        )

        # 実行
        inside = sut.interval_contains("mu", REFERENCE_SVCJ_PARAMS.mu)
        outside = sut.interval_contains("mu", REFERENCE_SVCJ_PARAMS.mu + 0.3)
        params = sut.posterior_params()

        # 検証
        self.assertTrue(inside)
        self.assertFalse(outside)
        self.assertEqual(REFERENCE_SVCJ_PARAMS, params)
