import math
import unittest

from jumpvol.domain.models.options import (
    IvPoint,
    OptionKind,
    OptionSpec,
    PricingConfig,
    V0Policy,
)


class OptionSpecTest(unittest.TestCase):
    """ヨーロピアン・オプションテストクラス"""

    def test_instantiate_by_valid_attributes(self) -> None:
        """妥当な属性でオプションを構築できることを確認"""
        # 実行
        sut = OptionSpec(spot=100.0, strike=110.0, tau=30, rate=0.001)

        # 検証
        self.assertEqual(OptionKind.Call, sut.kind)
        self.assertAlmostEqual(1.1, sut.moneyness)
        self.assertAlmostEqual(math.exp(-0.03), sut.discount)

    def test_zero_strike_is_allowed(self) -> None:
        """権利行使価格が0のオプションを構築できることを確認"""
        # 実行
        sut = OptionSpec(spot=100.0, strike=0.0, tau=1)

        # 検証
        self.assertEqual(0.0, sut.moneyness)

    def test_can_not_instantiate_with_invalid_attributes(self) -> None:
        """不正な属性の場合に例外を発生することを確認"""
        # 準備
        invalid = [
            {"spot": 0.0, "strike": 100.0, "tau": 1},
            {"spot": 100.0, "strike": -1.0, "tau": 1},
            {"spot": 100.0, "strike": 100.0, "tau": 0},
        ]

        # 実行と検証
        for kwargs in invalid:
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(ValueError):
                    _ = OptionSpec(**kwargs)


class PricingConfigTest(unittest.TestCase):
    """Monte Carlo価格計算の設定テストクラス"""

    def test_fixed_policy_with_value(self) -> None:
        """初期分散を固定する場合に指定した値を保持することを確認"""
        # 実行
        sut = PricingConfig(v0_policy=V0Policy.Fixed, v0_value=2.0)

        # 検証
        self.assertEqual(2.0, sut.v0_value)

    def test_can_not_instantiate_fixed_policy_without_value(self) -> None:
        """初期分散を固定する場合に値がないと例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(ValueError):
            _ = PricingConfig(v0_policy=V0Policy.Fixed)

    def test_few_paths_are_warned(self) -> None:
        """経路数が少ない場合に警告を出力することを確認"""
        # 実行と検証
        with self.assertLogs("jumpvol.domain.models.options", level="WARNING"):
            _ = PricingConfig(paths=10)

    def test_can_not_instantiate_with_zero_threads(self) -> None:
        """スレッド数が0の場合に例外を発生することを確認"""
        # 実行と検証
        with self.assertRaises(ValueError):
            _ = PricingConfig(threads=0)

    def test_can_not_instantiate_with_non_positive_br_step(self) -> None:
        """BRモデルのステップ幅が正でない場合に例外を発生することを確認"""
        # 実行と検証
        for br_dt in [0.0, -1.0]:
            with self.subTest(br_dt=br_dt):
                with self.assertRaises(ValueError):
                    _ = PricingConfig(br_dt=br_dt)


class IvPointTest(unittest.TestCase):
    """インプライド・ボラティリティの点テストクラス"""

    def test_is_missing(self) -> None:
        """逆算できなかった点を判定できることを確認"""
        # 準備
        missing = IvPoint(1.0, 30, None, 0.0, 0.0, "no_solution")
        found = IvPoint(1.0, 30, 0.8, 5.0, 0.1)

        # 実行と検証
        self.assertTrue(missing.is_missing)
        self.assertFalse(found.is_missing)
