import abc

from .chains import ChainRepository
from .intraday import IntradayRepository
from .manifests import ManifestRepository
from .results import ResultRepository
from .series import PriceSeriesRepository


class RepositoryManager(abc.ABC):
    """リポジトリマネージャー"""

    @abc.abstractmethod
    def price_series(self) -> PriceSeriesRepository:
        """日次価格リポジトリを返す。

        Returns:
            PriceSeriesRepository: 日次価格リポジトリ
        """
        pass

    @abc.abstractmethod
    def intraday(self) -> IntradayRepository:
        """高頻度価格リポジトリを返す。

        Returns:
            IntradayRepository: 高頻度価格リポジトリ
        """
        pass

    @abc.abstractmethod
    def chain(self) -> ChainRepository:
        """連鎖リポジトリを返す。

        Returns:
            ChainRepository: 連鎖リポジトリ
        """
        pass

    @abc.abstractmethod
    def result(self) -> ResultRepository:
        """出力リポジトリを返す。

        Returns:
            ResultRepository: 出力リポジトリ
        """
        pass

    @abc.abstractmethod
    def manifest(self) -> ManifestRepository:
        """実行記録リポジトリを返す。

        Returns:
            ManifestRepository: 実行記録リポジトリ
        """
        pass
