# CSVの具象高頻度価格リポジトリ
#
# ファイルは timestamp,price の列を持つ60秒間隔の価格とする。

import pandas as pd

from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.intraday import IntradayPanel
from jumpvol.domain.repositories.intraday import IntradayRepository
from jumpvol.utils.highfreq import panel_from_prices


class IntradayRepositoryImpl(IntradayRepository):
    """CSVの高頻度価格リポジトリ"""

    def load(self, path: str, minutes_per_knot: int) -> IntradayPanel:
        """60秒間隔の価格を読み込み、日 x ノット x 分のパネルを返す。

        Args:
            path (str): ファイルのパス
            minutes_per_knot (int): ノット当たりの分数

        Raises:
            InvalidInputError: timestamp列またはprice列がありません。

        Returns:
            IntradayPanel: パネル
        """
        frame = pd.read_csv(path)
        if not {"timestamp", "price"} <= set(frame.columns):
            raise InvalidInputError(f"timestamp列またはprice列がありません: {path}")
        timestamps = pd.to_datetime(frame["timestamp"])
        return panel_from_prices(
            timestamps, frame["price"].to_numpy(dtype=float), minutes_per_knot
        )
