import json
import math
from dataclasses import replace

import numpy as np
import pandas as pd

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.br import BR_PARAMETER_NAMES, COJUMP_NAMES, Restriction
from jumpvol.domain.models.options import ModelFamily
from jumpvol.usecases.highfreq import (
    calibrate_br,
    estimate_cross_moments,
    estimate_spot_variance,
    load_br_params,
)
from jumpvol.usecases.pricing import price_option
from jumpvol.utils.highfreq import REQUIRED_ORDERS

from tests.integrations.usecases import UsecaseTestCase


class HighfreqTest(UsecaseTestCase):
    """高頻度価格を用いる推定のテスト"""

    def setUp(self) -> None:  # noqa: D102
        result = super().setUp()
        core = replace(self.cfg.core, intraday_path=self.write_intraday())
        self.cfg = replace(self.cfg, core=core)
        return result

    def test_estimate_spot_variance(self) -> None:
        """ノットごとのスポット分散と日ごとのボラティリティを保存することを確認"""
        # 実行
        spot_path, daily_path = estimate_spot_variance(self.repo_manager, self.cfg)

        # 検証
        spot = pd.read_csv(spot_path)
        self.assertEqual(30 * 24, len(spot))
        self.assertTrue((spot["sigma2_hat"] > 0).all())
        daily = pd.read_csv(daily_path)
        self.assertEqual(30, len(daily))
        # パーセント単位で1日当たり1%前後のボラティリティ
        self.assertTrue(daily["volatility"].between(0.3, 3.0).all())

    def test_estimate_cross_moments(self) -> None:
        """必要なすべての次数の交差モーメントを保存することを確認"""
        # 実行
        path = estimate_cross_moments(self.repo_manager, self.cfg)[0]

        # 検証
        frame = pd.read_csv(path)
        orders = set(zip(frame["p1"], frame["p2"]))
        self.assertEqual(set(REQUIRED_ORDERS), orders)
        self.assertTrue((frame["bandwidth"] > 0).all())

    def test_calibrate_and_price(self) -> None:
        """BRモデルを推定し、その推定値で価格を計算することを確認"""
        # 準備
        highfreq = replace(self.cfg.highfreq, restriction=Restriction.NoCojumps)
        pricing = replace(self.cfg.pricing, model=ModelFamily.Br, paths=1000, tau=7)
        cfg = replace(self.cfg, highfreq=highfreq, pricing=pricing)

        # 実行
        nimm_path = calibrate_br(self.repo_manager, cfg)[0]
        price_path = price_option(self.repo_manager, cfg, use_nimm=True)[0]

        # 検証
        with open(nimm_path, "rt", encoding="utf-8") as f:
            report = json.load(f)
        self.assertEqual("no_cojumps", report["restriction"])
        self.assertEqual(set(BR_PARAMETER_NAMES), set(report["params"]))
        self.assertLessEqual(report["objective"], report["initial_objective"])
        params = load_br_params(self.repo_manager, cfg)
        for name in COJUMP_NAMES:
            self.assertEqual(0.0, getattr(params, name))
        with open(price_path, "rt", encoding="utf-8") as f:
            payload = json.load(f)
        self.assertEqual("br", payload["model"]["family"])
        self.assertTrue(math.isfinite(payload["price"]))

    def test_can_not_estimate_without_intraday_file(self) -> None:
        """高頻度価格ファイルが指定されていない場合に例外を発生することを確認"""
        # 準備
        cfg = replace(self.cfg, core=replace(self.cfg.core, intraday_path=None))

        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = estimate_spot_variance(self.repo_manager, cfg)

    def test_can_not_price_without_calibration(self) -> None:
        """BRモデルの推定結果がない場合に例外を発生することを確認"""
        # 準備
        pricing = replace(self.cfg.pricing, model=ModelFamily.Br)
        cfg = replace(self.cfg, pricing=pricing)

        # 実行と検証
        with self.assertRaises(InvalidInputError):
            _ = price_option(self.repo_manager, cfg, use_nimm=True)

    def test_grid_is_strictly_increasing(self) -> None:
        """保存した評価点が狭義単調増加であることを確認"""
        # 実行
        path = estimate_cross_moments(self.repo_manager, self.cfg)[0]

        # 検証
        frame = pd.read_csv(path)
        grid = frame[(frame["p1"] == 2) & (frame["p2"] == 0)]["sigma"].to_numpy()
        self.assertTrue(np.all(np.diff(grid) > 0))
