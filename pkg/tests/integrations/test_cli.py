import io
import json
import os
from contextlib import redirect_stderr, redirect_stdout
from typing import List, Tuple

from jumpvol.__main__ import EXIT_FAILURE, EXIT_OK, main

from tests.integrations import IntegrationTestCase


class CommandLineTest(IntegrationTestCase):
    """コマンドラインのテスト"""

    def _main(self, argv: List[str]) -> Tuple[int, str, str]:
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = main(argv)
        return code, stdout.getvalue(), stderr.getvalue()

    def test_simulate(self) -> None:
        """simulateコマンドがファイルを1つ出力することを確認"""
        # 実行
        code, out, err = self._main(
            ["simulate", "-o", self.work_dir, "--horizon", "50", "--flavor", "SVJ"]
        )

        # 検証
        self.assertEqual(EXIT_OK, code)
        outputs = json.loads(out)["outputs"]
        self.assertEqual([os.path.join(self.work_dir, "simulated.csv")], outputs)
        self.assertIn("SVJ", err)

    def test_run_twice_is_up_to_date(self) -> None:
        """同じ設定のrunコマンドの2回目は最新と判定されることを確認"""
        # 準備
        argv = ["run", "-o", self.work_dir, "--stages", "simulate", "--seed", "2"]
        self._main(argv)

        # 実行
        code, out, _ = self._main(argv)

        # 検証
        self.assertEqual(EXIT_OK, code)
        result = json.loads(out)
        self.assertTrue(result["up_to_date"])
        self.assertEqual(["simulate"], result["completed_stages"])

    def test_config_file_and_arguments(self) -> None:
        """設定ファイルの値をコマンドライン引数が上書きすることを確認"""
        # 準備
        path = self.path("run.ini")
        with open(path, "wt", encoding="utf-8") as f:
            f.write("[simulate]\nhorizon = 40\n\n[pricing]\npaths = 1000\n")

        # 実行
        code, out, _ = self._main(
            ["price", "-c", path, "-o", self.work_dir, "--tau", "7", "--spot", "2000"]
        )

        # 検証
        self.assertEqual(EXIT_OK, code)
        with open(json.loads(out)["outputs"][0], "rt", encoding="utf-8") as f:
            payload = json.load(f)
        self.assertEqual(1000, payload["paths"])
        self.assertEqual(7, payload["tau"])
        self.assertEqual(2000.0, payload["spot"])

    def test_failed_stage_returns_failure(self) -> None:
        """ステージが失敗した場合に失敗の終了コードを返すことを確認"""
        # 実行
        code, out, err = self._main(["run", "-o", self.work_dir, "--stages", "nimm"])

        # 検証
        self.assertEqual(EXIT_FAILURE, code)
        self.assertEqual("", out)
        self.assertIn("spotvar", err)

    def test_unknown_stage_returns_failure(self) -> None:
        """存在しないステージで失敗の終了コードを返すことを確認"""
        # 実行
        code, _, _ = self._main(["run", "-o", self.work_dir, "--stages", "plot"])

        # 検証
        self.assertEqual(EXIT_FAILURE, code)

    def test_unknown_command_exits_with_usage_error(self) -> None:
        """存在しないコマンドで使い方の誤りとして終了することを確認"""
        # 実行
        with self.assertRaises(SystemExit) as cm:
            self._main(["plot"])

        # 検証
        self.assertEqual(2, cm.exception.code)
