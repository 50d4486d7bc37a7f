# sqlite3用の具象実行記録リポジトリ
#
# 乱数シード、入力ファイルのチェックサム、完了したステージはJSON文字列で記録する。

import json
import sqlite3
from typing import List, Optional, Tuple

from jumpvol.domain.models.runs import RunManifest
from jumpvol.domain.repositories.manifests import ManifestRepository


def manifest_from_rows(
    row: Tuple[str, str, str, str, str, int], outputs: List[Tuple[str, str]]
) -> RunManifest:
    """実行記録テーブルの行と出力ファイルの行から実行記録を返す。

    Args:
        row (Tuple[str, str, str, str, str, int]): 設定ハッシュ、バージョン、乱数シード、
            入力ファイルのチェックサム、完了したステージ、完了フラグの順に格納したタプル
        outputs (List[Tuple[str, str]]): 出力ファイルのパスとチェックサム

    Returns:
        RunManifest: 実行記録
    """
    return RunManifest(
        config_hash=row[0],
        artifact_version=row[1],
        seeds=json.loads(row[2]),
        input_checksums=json.loads(row[3]),
        outputs=[(path, checksum) for path, checksum in outputs],
        completed_stages=json.loads(row[4]),
        complete=bool(row[5]),
    )


class ManifestRepositoryImpl(ManifestRepository):
    """実行記録リポジトリ"""

    def __init__(self, conn: sqlite3.Connection) -> None:
        """イニシャライザ"""
        super().__init__()
        self.conn = conn

    def by_hash(self, config_hash: str) -> Optional[RunManifest]:
        """設定ハッシュで示される実行記録を返す。

        Args:
            config_hash (str): 設定ハッシュ

        Returns:
            Optional[RunManifest]: 実行記録、存在しない場合はNone
        """
        sql = """
            SELECT config_hash, artifact_version, seeds, input_checksums,
                completed_stages, complete
            FROM run_manifests
            WHERE config_hash = ?
        """
        row = self.conn.execute(sql, (config_hash,)).fetchone()
        if row is None:
            return None
        sql = """
            SELECT path, checksum
            FROM run_outputs
            WHERE config_hash = ?
            ORDER BY position
        """
        outputs = self.conn.execute(sql, (config_hash,)).fetchall()
        return manifest_from_rows(row, outputs)

    def register(self, manifest: RunManifest) -> None:
        """実行記録を登録する。同じ設定ハッシュの実行記録は置き換える。

        Args:
            manifest (RunManifest): 実行記録
        """
        try:
            self._delete(manifest.config_hash)
            sql = "INSERT INTO run_manifests VALUES (?, ?, ?, ?, ?, ?)"
            self.conn.execute(
                sql,
                (
                    manifest.config_hash,
                    manifest.artifact_version,
                    json.dumps(manifest.seeds),
                    json.dumps(manifest.input_checksums, sort_keys=True),
                    json.dumps(manifest.completed_stages),
                    int(manifest.complete),
                ),
            )
            sql = "INSERT INTO run_outputs VALUES (?, ?, ?, ?)"
            for position, (path, checksum) in enumerate(manifest.outputs):
                self.conn.execute(
                    sql, (manifest.config_hash, position, path, checksum)
                )
            self.conn.commit()
        except Exception:
            self.conn.rollback()
            raise

    def delete(self, config_hash: str) -> None:
        """実行記録を削除する。

        Args:
            config_hash (str): 設定ハッシュ
        """
        self._delete(config_hash)
        self.conn.commit()

    def _delete(self, config_hash: str) -> None:
        self.conn.execute(
            "DELETE FROM run_outputs WHERE config_hash = ?", (config_hash,)
        )
        self.conn.execute(
            "DELETE FROM run_manifests WHERE config_hash = ?", (config_hash,)
        )
