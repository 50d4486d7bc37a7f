import math
import os

import numpy as np
import pandas as pd

from jumpvol.common import RngStream
from jumpvol.domain.models.mcmc import McmcConfig, PriorSpec
from jumpvol.domain.models.svcj import (
    REFERENCE_SVCJ_PARAMS,
    SVCJ_PARAMETER_NAMES,
    ModelFlavor,
)
from jumpvol.infra.repositories.csv.chains import ChainRepositoryImpl
from jumpvol.infra.repositories.csv.results import ResultRepositoryImpl
from jumpvol.utils.simulation import simulate_svcj
from jumpvol.utils.svcj_sampler import run_chains, summarize

from tests.integrations import IntegrationTestCase


class ChainRepositoryImplTest(IntegrationTestCase):
    """CSVの連鎖リポジトリテスト"""

    def setUp(self) -> None:  # noqa: D102
        result = super().setUp()
        v0 = REFERENCE_SVCJ_PARAMS.long_run_variance()
        self.returns, _ = simulate_svcj(
            REFERENCE_SVCJ_PARAMS, ModelFlavor.SVCJ, v0, 120, RngStream(5)
        )
        cfg = McmcConfig(iterations=30, burn_in=10, seed=RngStream(6), latent_thin=10)
        self.chains = run_chains(self.returns, ModelFlavor.SVCJ, PriorSpec(), cfg, 2)
        self.summary = summarize(self.chains, self.returns)
        return result

    def test_save(self) -> None:
        """連鎖と潜在変数と要約を保存できることを確認"""
        # 準備
        sut = ChainRepositoryImpl()

        # 実行
        paths = sut.save(self.path("fit"), self.chains, self.summary)

        # 検証
        self.assertEqual(
            ["chain.csv", "latent.csv", "summary.json"],
            [os.path.basename(p) for p in paths],
        )
        chain = pd.read_csv(paths[0])
        self.assertEqual(["chain", "iteration", "burn_in"], list(chain.columns[:3]))
        self.assertEqual(SVCJ_PARAMETER_NAMES, list(chain.columns[3:]))
        self.assertEqual(60, len(chain))
        self.assertEqual(20, int(chain["burn_in"].sum()))
        latent = pd.read_csv(paths[1])
        # バーンイン後の反復10と20の潜在変数を2連鎖分、各T + 1行
        self.assertEqual(2 * 2 * 121, len(latent))

    def test_save_and_load_summary(self) -> None:
        """保存した要約を読み込むと同じ値になることを確認"""
        # 準備
        sut = ChainRepositoryImpl()
        sut.save(self.path("fit"), self.chains, self.summary)

        # 実行
        loaded = sut.load_summary(self.path("fit"))

        # 検証
        self.assertEqual(self.summary.mean, loaded.mean)
        self.assertEqual(self.summary.quantile_975, loaded.quantile_975)
        np.testing.assert_allclose(self.summary.variance_path, loaded.variance_path)
        np.testing.assert_array_equal(
            self.summary.detected_jumps, loaded.detected_jumps
        )
        self.assertTrue(math.isclose(self.summary.mse, loaded.mse))

    def test_saved_bytes_are_deterministic(self) -> None:
        """同じ連鎖を保存すると同じバイト列になることを確認"""
        # 準備
        sut = ChainRepositoryImpl()

        # 実行
        first = sut.save(self.path("a"), self.chains, self.summary)
        second = sut.save(self.path("b"), self.chains, self.summary)

        # 検証
        for p, q in zip(first, second):
            with open(p, "rb") as f, open(q, "rb") as g:
                self.assertEqual(f.read(), g.read())


class ResultRepositoryImplTest(IntegrationTestCase):
    """ファイルの出力リポジトリテスト"""

    def test_write_json_replaces_non_finite_values(self) -> None:
        """有限でない値をnullで保存し、numpyの値を変換することを確認"""
        # 準備
        sut = ResultRepositoryImpl()
        path = self.path("out", "result.json")

        # 実行
        sut.write_json(
            path, {"b": np.float64(np.nan), "a": np.array([1, 2]), "c": np.int64(3)}
        )
        loaded = sut.read_json(path)

        # 検証
        self.assertEqual({"a": [1, 2], "b": None, "c": 3}, loaded)

    def test_write_and_read_frame(self) -> None:
        """データフレームをCSVで保存して読み込めることを確認"""
        # 準備
        sut = ResultRepositoryImpl()
        path = self.path("out", "table.csv")
        frame = pd.DataFrame({"strike": [1250.0, 1350.0], "price": [1000.5, 900.25]})

        # 実行
        sut.write_frame(path, frame)

        # 検証
        pd.testing.assert_frame_equal(frame, sut.read_frame(path))
