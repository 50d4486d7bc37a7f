import abc

from jumpvol.domain.models.intraday import IntradayPanel


class IntradayRepository(abc.ABC):
    """高頻度価格のリポジトリ"""

    @abc.abstractmethod
    def load(self, path: str, minutes_per_knot: int) -> IntradayPanel:
        """60秒間隔の価格を読み込み、日 x ノット x 分のパネルを返す。

        Args:
            path (str): ファイルのパス
            minutes_per_knot (int): ノット当たりの分数

        Returns:
            IntradayPanel: パネル
        """
        pass
