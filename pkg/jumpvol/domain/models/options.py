import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Union

import numpy as np

from jumpvol.common import RngStream
from jumpvol.domain.models.br import BrParams
from jumpvol.domain.models.svcj import ModelFlavor, SvcjParams

logger = logging.getLogger(__name__)

# Crude Monte Carloの既定の経路数
DEFAULT_PATHS = 20000

# 警告を出す経路数の下限
MIN_RECOMMENDED_PATHS = 1000


class OptionKind(Enum):
    """オプションの種類"""

    # コール
    Call = "call"
    # プット
    Put = "put"


class V0Policy(Enum):
    """初期分散の決め方"""

    # 長期平均
    LongRunMean = "long_run_mean"
    # 固定値
    Fixed = "fixed"
    # 推定した最終日の分散
    PosteriorLastDay = "posterior_last_day"


class ModelFamily(Enum):
    """価格計算に用いるモデルの系統"""

    # SV、SVJ、SVCJモデル
    Svcj = "svcj"
    # BRモデル
    Br = "br"


@dataclass(frozen=True)
class OptionSpec:
    """ヨーロピアン・オプション"""

    # 現在の原資産価格
    spot: float
    # 権利行使価格 (0を許す)
    strike: float
    # 満期までの日数
    tau: int
    # 1日当たりの連続複利の無リスク金利
    rate: float = 0.0
    # 種類
    kind: OptionKind = OptionKind.Call

    def __post_init__(self) -> None:
        """オプションを検証する。

        Raises:
            ValueError: 原資産価格が正ではありません。
            ValueError: 権利行使価格が負です。
            ValueError: 満期までの日数が正ではありません。
        """
        if not self.spot > 0:
            raise ValueError("原資産価格が正ではありません。")
        if self.strike < 0:
            raise ValueError("権利行使価格が負です。")
        if self.tau <= 0:
            raise ValueError("満期までの日数が正ではありません。")

    @property
    def moneyness(self) -> float:
        """マネーネスを返す。

        Returns:
            float: K / S_t
        """
        return self.strike / self.spot

    @property
    def discount(self) -> float:
        """割引係数を返す。

        Returns:
            float: exp(-r * tau)
        """
        return math.exp(-self.rate * self.tau)


@dataclass(frozen=True)
class PricingConfig:
    """Monte Carlo価格計算の設定"""

    # 経路数
    paths: int = DEFAULT_PATHS
    # 乱数ストリーム (経路iはサブストリームiを使う)
    seed: RngStream = field(default_factory=lambda: RngStream(0))
    # 初期分散の決め方
    v0_policy: V0Policy = V0Policy.LongRunMean
    # 初期分散 (V0Policy.Fixedまたは事後分布から与える場合)
    v0_value: Optional[float] = None
    # 並列に処理するスレッド数
    threads: int = 1
    # 一度に生成する経路数
    chunk_size: int = 1000
    # BRモデルのステップ幅 (日)
    br_dt: float = 1.0

    def __post_init__(self) -> None:
        """設定を検証する。

        Raises:
            ValueError: 経路数が1未満です。
            ValueError: 初期分散が与えられていません。
            ValueError: スレッド数またはチャンクサイズが1未満です。
            ValueError: BRモデルのステップ幅が正ではありません。
        """
        if self.paths < 1:
            raise ValueError("経路数が1未満です。")
        if self.v0_policy != V0Policy.LongRunMean and self.v0_value is None:
            raise ValueError("初期分散が与えられていません。")
        if self.threads < 1 or self.chunk_size < 1:
            raise ValueError("スレッド数またはチャンクサイズが1未満です。")
        if not self.br_dt > 0:
            raise ValueError("BRモデルのステップ幅が正ではありません。")
        if self.paths < MIN_RECOMMENDED_PATHS:
            logger.warning("経路数が少なすぎます (paths=%d)。", self.paths)


@dataclass(frozen=True)
class IvPoint:
    """インプライド・ボラティリティ曲面の点"""

    # マネーネス
    moneyness: float
    # 満期までの日数
    tau: int
    # 年率換算したインプライド・ボラティリティ (逆算できない場合はNone)
    implied_vol: Optional[float]
    # Monte Carlo価格
    price: float
    # 価格の標準誤差
    std_error: float
    # 逆算できなかった理由
    reason: str = ""

    @property
    def is_missing(self) -> bool:
        """逆算できなかったか確認する。

        Returns:
            bool: 逆算できなかった場合はTrue
        """
        return self.implied_vol is None


@dataclass(frozen=True)
class SvcjModel:
    """価格計算に用いるSVCJモデル (パーセント単位のパラメーター)"""

    params: SvcjParams
    flavor: ModelFlavor = ModelFlavor.SVCJ


@dataclass(frozen=True)
class BrModel:
    """価格計算に用いるBRモデル (パーセント単位のパラメーター)"""

    params: BrParams


PricingModel = Union[SvcjModel, BrModel]


@dataclass
class PriceTable:
    """権利行使価格 x 満期の価格表"""

    # 権利行使価格
    strikes: List[float]
    # 満期までの日数
    taus: List[int]
    # 価格 (権利行使価格の数, 満期の数)
    prices: np.ndarray
    # 価格の標準誤差 (権利行使価格の数, 満期の数)
    std_errors: np.ndarray
