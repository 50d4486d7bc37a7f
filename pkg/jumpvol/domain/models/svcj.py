import logging
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Dict, List, Self

import numpy as np

logger = logging.getLogger(__name__)

# SVCJパラメーターの名前 (連鎖ファイルの列順)
SVCJ_PARAMETER_NAMES: List[str] = [
    "mu",
    "mu_y",
    "sigma_y",
    "lam",
    "alpha",
    "beta",
    "rho",
    "sigma_v",
    "rho_j",
    "mu_v",
]


class ModelFlavor(Enum):
    """確率ボラティリティモデルの種類"""

    # ジャンプなし
    SV = "SV"
    # リターンだけにジャンプ
    SVJ = "SVJ"
    # リターンと分散に相関したジャンプ
    SVCJ = "SVCJ"

    @property
    def has_jumps(self) -> bool:
        """ジャンプを含むか確認する。

        Returns:
            bool: ジャンプを含む場合はTrue
        """
        return self != ModelFlavor.SV

    @property
    def has_variance_jumps(self) -> bool:
        """分散ジャンプを含むか確認する。

        Returns:
            bool: 分散ジャンプを含む場合はTrue
        """
        return self == ModelFlavor.SVCJ


@dataclass(frozen=True)
class SvcjParams:
    """SVCJモデルのパラメーター (1日当たり)

    分散の推移は V_t = alpha + beta * V_{t-1} + sigma_v * sqrt(V_{t-1}) * e + Zv * J
    で、alpha = kappa * theta、beta = 1 - kappa である。
    """

    # ドリフト
    mu: float
    # リターンジャンプの平均
    mu_y: float
    # リターンジャンプの標準偏差
    sigma_y: float
    # ジャンプ強度 (1日当たりの確率)
    lam: float
    # 分散の切片
    alpha: float
    # 分散の自己回帰係数
    beta: float
    # 拡散項の相関
    rho: float
    # ボラティリティのボラティリティ
    sigma_v: float
    # ジャンプサイズの結合係数
    rho_j: float
    # 分散ジャンプの平均
    mu_v: float

    def __post_init__(self) -> None:
        """パラメーターを検証する。

        Raises:
            ValueError: ジャンプ強度が0以上1以下ではありません。
            ValueError: 標準偏差またはジャンプ平均が負です。
            ValueError: 拡散項の相関の絶対値が1以上です。
        """
        if not all(np.isfinite(getattr(self, f.name)) for f in fields(self)):
            raise ValueError("SVCJパラメーターに有限でない値が含まれています。")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("ジャンプ強度が0以上1以下ではありません。")
        if self.sigma_y < 0 or self.sigma_v < 0 or self.mu_v < 0:
            raise ValueError("標準偏差またはジャンプ平均が負です。")
        if not abs(self.rho) < 1.0:
            raise ValueError("拡散項の相関の絶対値が1以上です。")
        if not abs(self.beta) < 1.0:
            logger.warning("分散過程が定常ではありません (beta=%.4f)。", self.beta)

    @property
    def kappa(self) -> float:
        """平均回帰速度を返す。

        Returns:
            float: kappa = 1 - beta
        """
        return 1.0 - self.beta

    @property
    def theta(self) -> float:
        """拡散部分の平均回帰水準を返す。

        Returns:
            float: theta = alpha / kappa
        """
        return self.alpha / self.kappa

    def long_run_variance(self) -> float:
        """分散の長期平均を返す。

        Returns:
            float: (alpha + lam * mu_v) / (1 - beta)
        """
        return (self.alpha + self.lam * self.mu_v) / (1.0 - self.beta)

    def restricted(self, flavor: ModelFlavor) -> Self:
        """モデルの種類に応じた制約を課したパラメーターを返す。

        SVはジャンプ強度を0に、SVJは分散ジャンプと結合係数を0にする。

        Args:
            flavor (ModelFlavor): モデルの種類

        Returns:
            Self: 制約を課したパラメーター
        """
        if flavor == ModelFlavor.SV:
            return replace(self, lam=0.0, mu_y=0.0, sigma_y=0.0, rho_j=0.0, mu_v=0.0)
        if flavor == ModelFlavor.SVJ:
            return replace(self, rho_j=0.0, mu_v=0.0)
        return self

    def as_dict(self) -> Dict[str, float]:
        """パラメーターを辞書で返す。

        Returns:
            Dict[str, float]: パラメーター名と値の辞書
        """
        return {name: float(getattr(self, name)) for name in SVCJ_PARAMETER_NAMES}

    @classmethod
    def from_dict(cls, values: Dict[str, float]) -> Self:
        """辞書からパラメーターを構築する。

        Args:
            values (Dict[str, float]): パラメーター名と値の辞書

        Returns:
            Self: パラメーター
        """
        return cls(**{name: float(values[name]) for name in SVCJ_PARAMETER_NAMES})


# ビットコインの日次リターンから推定したSVCJパラメーター (パーセント単位)
REFERENCE_SVCJ_PARAMS = SvcjParams(
    mu=0.041,
    mu_y=-0.084,
    sigma_y=2.155,
    lam=0.041,
    alpha=0.010,
    beta=-0.132,
    rho=0.407,
    sigma_v=0.008,
    rho_j=-0.573,
    mu_v=0.620,
)


@dataclass(frozen=True)
class LatentPath:
    """潜在変数の経路

    Vは初期分散V_0を含むT+1個、J、Zy、ZvはT個の要素を持つ。
    """

    # 分散
    V: np.ndarray
    # ジャンプの有無
    J: np.ndarray
    # リターンジャンプのサイズ
    Zy: np.ndarray
    # 分散ジャンプのサイズ
    Zv: np.ndarray

    def __init__(
        self, V: np.ndarray, J: np.ndarray, Zy: np.ndarray, Zv: np.ndarray
    ) -> None:
        """イニシャライザ

        Args:
            V (np.ndarray): 分散
            J (np.ndarray): ジャンプの有無
            Zy (np.ndarray): リターンジャンプのサイズ
            Zv (np.ndarray): 分散ジャンプのサイズ

        Raises:
            ValueError: 潜在変数の長さが一致しません。
            ValueError: 分散が負です。
            ValueError: 分散ジャンプのサイズが負です。
        """
        horizon = len(J)
        if len(V) != horizon + 1 or len(Zy) != horizon or len(Zv) != horizon:
            raise ValueError("潜在変数の長さが一致しません。")
        if np.any(np.asarray(V) < 0):
            raise ValueError("分散が負です。")
        if np.any(np.asarray(Zv) < 0):
            raise ValueError("分散ジャンプのサイズが負です。")
        object.__setattr__(self, "V", np.array(V, dtype=float))
        object.__setattr__(self, "J", np.array(J, dtype=np.int8))
        object.__setattr__(self, "Zy", np.array(Zy, dtype=float))
        object.__setattr__(self, "Zv", np.array(Zv, dtype=float))

    def __len__(self) -> int:  # noqa: D105
        return len(self.J)
