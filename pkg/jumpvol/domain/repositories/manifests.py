import abc
from typing import Optional

from jumpvol.domain.models.runs import RunManifest


class ManifestRepository(abc.ABC):
    """パイプラインの実行記録のリポジトリ"""

    @abc.abstractmethod
    def by_hash(self, config_hash: str) -> Optional[RunManifest]:
        """設定ハッシュで示される実行記録を返す。

        Args:
            config_hash (str): 設定ハッシュ

        Returns:
            Optional[RunManifest]: 実行記録、存在しない場合はNone
        """
        pass

    @abc.abstractmethod
    def register(self, manifest: RunManifest) -> None:
        """実行記録を登録する。同じ設定ハッシュの実行記録は置き換える。

        Args:
            manifest (RunManifest): 実行記録
        """
        pass

    @abc.abstractmethod
    def delete(self, config_hash: str) -> None:
        """実行記録を削除する。

        Args:
            config_hash (str): 設定ハッシュ
        """
        pass
