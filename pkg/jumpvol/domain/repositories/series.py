import abc
from typing import Optional

from jumpvol.domain.models.series import PriceSeries, ReturnSeries
from jumpvol.domain.models.svcj import LatentPath


class PriceSeriesRepository(abc.ABC):
    """日次価格とリターンのリポジトリ"""

    @abc.abstractmethod
    def load_prices(self, path: str) -> PriceSeries:
        """日次価格を読み込む。

        Args:
            path (str): ファイルのパス

        Returns:
            PriceSeries: 価格系列
        """
        pass

    @abc.abstractmethod
    def load_returns(self, path: str) -> ReturnSeries:
        """日次対数リターンを読み込む。

        ファイルが価格を記録している場合は対数リターンに変換する。

        Args:
            path (str): ファイルのパス

        Returns:
            ReturnSeries: 小数単位の対数リターン系列
        """
        pass

    @abc.abstractmethod
    def save_returns(
        self, path: str, returns: ReturnSeries, latent: Optional[LatentPath] = None
    ) -> None:
        """日次対数リターンと潜在変数を保存する。

        Args:
            path (str): ファイルのパス
            returns (ReturnSeries): リターン系列
            latent (Optional[LatentPath]): 潜在変数
        """
        pass
