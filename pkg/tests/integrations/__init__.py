import os
import shutil
import sqlite3
import sys
import unittest
import uuid
from glob import glob
from typing import Tuple

from termcolor import colored

from jumpvol import DATABASE_FILE_NAME, connect_to_database
from jumpvol.infra.repositories import RepositoryManagerImpl

WORK_DIR = os.path.join(os.getcwd(), "tests", "integrations", "work")


def remove_test_dirs() -> None:
    """テスト用ディレクトリをすべて削除する。"""
    path = os.path.join(WORK_DIR, "test_*")
    for dir_path in glob(path, recursive=False):
        try:
            shutil.rmtree(dir_path)
        except Exception:
            print(f"can't remove {dir_path}", file=sys.stderr)


def create_test_dir() -> Tuple[sqlite3.Connection, str]:
    """テスト用の出力ディレクトリと実行記録データベースを作成する。

    Returns:
        Tuple[sqlite3.Connection, str]: データベース接続と出力ディレクトリのパスを
            格納したタプル
    """
    dir_path = os.path.join(WORK_DIR, f"test_{uuid.uuid4()}")
    os.makedirs(dir_path)
    conn = connect_to_database(os.path.join(dir_path, DATABASE_FILE_NAME))
    return conn, dir_path


class IntegrationTestCase(unittest.TestCase):
    """統合テストクラス

    テストケースごとに出力ディレクトリと実行記録データベースを作成して、
    tearDownで削除する。sqlite3はコミットするとSAVEPOINTをすべて削除するため、
    SAVEPOINTへのロールバックでは各テストケースの前の状態に戻せない。
    """

    # データベース接続
    conn: sqlite3.Connection
    # 出力ディレクトリ
    work_dir: str = ""
    # リポジトリマネージャー
    repo_manager: RepositoryManagerImpl

    @classmethod
    def setUpClass(cls) -> None:  # noqa:D102
        result = super().setUpClass()
        # テスト用ディレクトリをすべて削除
        remove_test_dirs()
        return result

    def setUp(self) -> None:  # noqa: D102
        result = super().setUp()
        conn, work_dir = create_test_dir()
        self.conn = conn
        self.work_dir = work_dir
        self.repo_manager = RepositoryManagerImpl(conn)
        return result

    def tearDown(self) -> None:  # noqa: D102
        # テスト用データベースと切断
        self.conn.close()
        # テスト用ディレクトリを削除
        try:
            shutil.rmtree(self.work_dir)
        except Exception:
            print(colored(f"can't remove {self.work_dir}", "red"), file=sys.stderr)
        return super().tearDown()

    def path(self, *names: str) -> str:
        """出力ディレクトリ内のパスを返す。

        Args:
            *names (str): 出力ディレクトリからの相対パスの要素

        Returns:
            str: パス
        """
        return os.path.join(self.work_dir, *names)


class IntegrationTestCaseTest(IntegrationTestCase):
    """統合テストクラスのテスト"""

    def test_can_access_to_database(self) -> None:
        """テスト用のデータベースにテーブルが作成されているか確認"""
        sql = "SELECT name FROM sqlite_master WHERE type = 'table' ORDER BY name"
        names = [row[0] for row in self.conn.execute(sql).fetchall()]
        self.assertEqual(["run_manifests", "run_outputs"], names)

    def tearDown(self) -> None:  # noqa: D102
        result = super().tearDown()
        # 出力ディレクトリが削除されていることを確認
        self.assertFalse(os.path.isdir(self.work_dir))
        return result
