import abc
from typing import List

from jumpvol.domain.models.mcmc import PosteriorChain, PosteriorSummary


class ChainRepository(abc.ABC):
    """MCMCの連鎖と事後分布の要約のリポジトリ"""

    @abc.abstractmethod
    def save(
        self, directory: str, chains: List[PosteriorChain], summary: PosteriorSummary
    ) -> List[str]:
        """連鎖と要約を保存する。

        Args:
            directory (str): 保存先のディレクトリ
            chains (List[PosteriorChain]): 連鎖
            summary (PosteriorSummary): 事後分布の要約

        Returns:
            List[str]: 保存したファイルのパス
        """
        pass

    @abc.abstractmethod
    def load_summary(self, directory: str) -> PosteriorSummary:
        """事後分布の要約を読み込む。

        Args:
            directory (str): 保存先のディレクトリ

        Returns:
            PosteriorSummary: 事後分布の要約
        """
        pass
