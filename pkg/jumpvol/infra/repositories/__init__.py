import sqlite3

from jumpvol.domain.repositories import RepositoryManager
from jumpvol.domain.repositories.chains import ChainRepository
from jumpvol.domain.repositories.intraday import IntradayRepository
from jumpvol.domain.repositories.manifests import ManifestRepository
from jumpvol.domain.repositories.results import ResultRepository
from jumpvol.domain.repositories.series import PriceSeriesRepository
from jumpvol.infra.repositories.csv.chains import ChainRepositoryImpl
from jumpvol.infra.repositories.csv.intraday import IntradayRepositoryImpl
from jumpvol.infra.repositories.csv.results import ResultRepositoryImpl
from jumpvol.infra.repositories.csv.series import PriceSeriesRepositoryImpl
from jumpvol.infra.repositories.sqlite.manifests import ManifestRepositoryImpl


class RepositoryManagerImpl(RepositoryManager):
    """ファイルとsqliteのリポジトリマネージャー

    入出力はCSVとJSONのファイル、実行記録はsqliteのデータベースに保存する。
    """

    def __init__(self, conn: sqlite3.Connection) -> None:
        """イニシャライザ

        Args:
            conn (sqlite3.Connection): 実行記録データベースの接続
        """
        self.conn = conn

    def price_series(self) -> PriceSeriesRepository:
        """日次価格リポジトリを返す。

        Returns:
            PriceSeriesRepository: 日次価格リポジトリ
        """
        return PriceSeriesRepositoryImpl()

    def intraday(self) -> IntradayRepository:
        """高頻度価格リポジトリを返す。

        Returns:
            IntradayRepository: 高頻度価格リポジトリ
        """
        return IntradayRepositoryImpl()

    def chain(self) -> ChainRepository:
        """連鎖リポジトリを返す。

        Returns:
            ChainRepository: 連鎖リポジトリ
        """
        return ChainRepositoryImpl()

    def result(self) -> ResultRepository:
        """出力リポジトリを返す。

        Returns:
            ResultRepository: 出力リポジトリ
        """
        return ResultRepositoryImpl()

    def manifest(self) -> ManifestRepository:
        """実行記録リポジトリを返す。

        Returns:
            ManifestRepository: 実行記録リポジトリ
        """
        return ManifestRepositoryImpl(self.conn)
