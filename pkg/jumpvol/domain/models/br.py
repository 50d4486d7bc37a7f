import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Dict, List, Self, Tuple

from jumpvol.common import RngStream

# BRモデルのパラメーター名
BR_PARAMETER_NAMES: List[str] = [
    "mu_r",
    "rho0",
    "rho1",
    "m0",
    "m1",
    "Lambda",
    "mu_Jr",
    "sigma_Jr",
    "mu_JJr0",
    "mu_JJr1",
    "sigma_JJr0",
    "sigma_JJr1",
    "sigma_JJr2",
    "mu_Jsigma",
    "sigma_Jsigma",
    "mu_JJsigma",
    "sigma_JJsigma",
    "rho_J",
    "lambda_r",
    "lambda_sigma",
    "lambda_rsigma",
]

# 独立ジャンプのパラメーター
INDEPENDENT_JUMP_NAMES: List[str] = [
    "mu_Jr",
    "sigma_Jr",
    "mu_Jsigma",
    "sigma_Jsigma",
    "lambda_r",
    "lambda_sigma",
]

# 共通ジャンプのパラメーター
COJUMP_NAMES: List[str] = [
    "mu_JJr0",
    "mu_JJr1",
    "sigma_JJr0",
    "sigma_JJr1",
    "sigma_JJr2",
    "mu_JJsigma",
    "sigma_JJsigma",
    "rho_J",
    "lambda_rsigma",
]

# 標準偏差を表すパラメーター
STANDARD_DEVIATION_NAMES: List[str] = [
    "Lambda",
    "sigma_Jr",
    "sigma_JJr0",
    "sigma_JJr1",
    "sigma_Jsigma",
    "sigma_JJsigma",
]

# ジャンプ強度のパラメーター
INTENSITY_NAMES: List[str] = ["lambda_r", "lambda_sigma", "lambda_rsigma"]


class Restriction(Enum):
    """BRモデルの制約"""

    # 制約なし
    Full = "full"
    # 共通ジャンプなし
    NoCojumps = "no_cojumps"
    # 独立ジャンプなし
    NoIndependentJumps = "no_independent_jumps"

    def pinned(self) -> List[str]:
        """0に固定するパラメーターを返す。

        Returns:
            List[str]: 0に固定するパラメーター名
        """
        if self == Restriction.NoCojumps:
            return list(COJUMP_NAMES)
        if self == Restriction.NoIndependentJumps:
            return list(INDEPENDENT_JUMP_NAMES)
        return []


@dataclass(frozen=True)
class BrParams:
    """価格と分散の共通ジャンプを持つ非アフィン (BR) モデルのパラメーター"""

    # ドリフト
    mu_r: float
    # レバレッジの切片
    rho0: float
    # レバレッジの傾き
    rho1: float
    # 対数分散ドリフトの切片
    m0: float
    # 対数分散ドリフトの傾き
    m1: float
    # 対数分散のボラティリティ
    Lambda: float
    # 独立リターンジャンプの平均
    mu_Jr: float
    # 独立リターンジャンプの標準偏差
    sigma_Jr: float
    # 共通ジャンプのリターン平均の切片
    mu_JJr0: float
    # 共通ジャンプのリターン平均の傾き
    mu_JJr1: float
    # 共通ジャンプのリターン標準偏差の切片
    sigma_JJr0: float
    # 共通ジャンプのリターン標準偏差の係数
    sigma_JJr1: float
    # 共通ジャンプのリターン標準偏差の指数
    sigma_JJr2: float
    # 独立分散ジャンプの平均
    mu_Jsigma: float
    # 独立分散ジャンプの標準偏差
    sigma_Jsigma: float
    # 共通ジャンプの分散平均
    mu_JJsigma: float
    # 共通ジャンプの分散標準偏差
    sigma_JJsigma: float
    # 共通ジャンプサイズの相関
    rho_J: float
    # 独立リターンジャンプの強度
    lambda_r: float
    # 独立分散ジャンプの強度
    lambda_sigma: float
    # 共通ジャンプの強度
    lambda_rsigma: float

    def __post_init__(self) -> None:
        """パラメーターを検証する。

        Raises:
            ValueError: BRパラメーターに有限でない値が含まれています。
            ValueError: ジャンプ強度が負です。
            ValueError: 共通ジャンプサイズの相関の絶対値が1を超えています。
            ValueError: 標準偏差が負です。
        """
        if not all(math.isfinite(getattr(self, f.name)) for f in fields(self)):
            raise ValueError("BRパラメーターに有限でない値が含まれています。")
        if any(getattr(self, name) < 0 for name in INTENSITY_NAMES):
            raise ValueError("ジャンプ強度が負です。")
        if abs(self.rho_J) > 1.0:
            raise ValueError("共通ジャンプサイズの相関の絶対値が1を超えています。")
        if any(getattr(self, name) < 0 for name in STANDARD_DEVIATION_NAMES):
            raise ValueError("標準偏差が負です。")

    def restricted(self, restriction: Restriction) -> Self:
        """制約に応じてパラメーターを0に固定する。

        Args:
            restriction (Restriction): 制約

        Returns:
            Self: 制約を課したパラメーター
        """
        return replace(self, **{name: 0.0 for name in restriction.pinned()})

    def without_jumps(self) -> Self:
        """すべてのジャンプを取り除いたパラメーターを返す。

        Returns:
            Self: ジャンプ強度を0にしたパラメーター
        """
        return replace(self, **{name: 0.0 for name in INTENSITY_NAMES})

    def long_run_log_variance(self) -> float:
        """対数分散の長期平均を返す。

        Returns:
            float: 対数分散の長期平均、m1が負でない場合はnan
        """
        if self.m1 >= 0:
            return math.nan
        jump_drift = (
            self.lambda_sigma * self.mu_Jsigma + self.lambda_rsigma * self.mu_JJsigma
        )
        return -(self.m0 + jump_drift) / self.m1

    def as_dict(self) -> Dict[str, float]:
        """パラメーターを辞書で返す。

        Returns:
            Dict[str, float]: パラメーター名と値の辞書
        """
        return {name: float(getattr(self, name)) for name in BR_PARAMETER_NAMES}

    @classmethod
    def from_dict(cls, values: Dict[str, float]) -> Self:
        """辞書からパラメーターを構築する。

        Args:
            values (Dict[str, float]): パラメーター名と値の辞書

        Returns:
            Self: パラメーター
        """
        return cls(**{name: float(values[name]) for name in BR_PARAMETER_NAMES})


# ビットコインの高頻度データから推定したBRパラメーター (制約なし、パーセント単位)
REFERENCE_BR_PARAMS = BrParams(
    mu_r=0.0082,
    rho0=-0.1485,
    rho1=0.9292,
    m0=-0.0495,
    m1=-0.0600,
    Lambda=0.6766,
    mu_Jr=2.5486,
    sigma_Jr=0.6890,
    mu_JJr0=-0.0187,
    mu_JJr1=0.1265,
    sigma_JJr0=0.0043,
    sigma_JJr1=1.2159,
    sigma_JJr2=3.9590,
    mu_Jsigma=-0.2783,
    sigma_Jsigma=0.8619,
    mu_JJsigma=-0.4927,
    sigma_JJsigma=0.0717,
    rho_J=-0.5257,
    lambda_r=0.0,
    lambda_sigma=0.0519,
    lambda_rsigma=0.0584,
)


@dataclass
class NimmReport:
    """NIMMによる推定の結果"""

    # 推定に用いた制約
    restriction: Restriction
    # 推定したパラメーター
    free: List[str]
    # 推定値における目的関数の値
    objective: float
    # 初期値における目的関数の値
    initial_objective: float
    # いずれかの最適化が収束したか
    converged: bool
    # 目的関数の評価回数
    evaluations: int
    # 最適化の開始点の数
    restarts: int
    # どの開始点からも初期値を改善できず、初期値を返したか
    returned_initial: bool = False
    # 次数ごとの目的関数への寄与
    contributions: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class NimmConfig:
    """NIMMの設定"""

    # モデルの交差モーメントを求める複製の数
    reps: int = 100000
    # 1日を分割するステップ数
    substeps: int = 20
    # 共通乱数と再開点の乱数ストリーム
    seed: RngStream = field(default_factory=lambda: RngStream(0))
    # 最適化の開始点の数
    restarts: int = 3
    # 最適化1回当たりの最大反復回数
    max_iterations: int = 2000
    # 推定せずに初期値に固定するパラメーター
    fixed: Tuple[str, ...] = ()
    # 再開点を作るときの相対的な摂動の大きさ
    perturbation: float = 0.1
    # 重みの下限に用いる分散の分位点
    weight_floor_quantile: float = 0.1

    def __post_init__(self) -> None:
        """設定を検証する。

        Raises:
            ValueError: 複製の数、ステップ数、開始点の数のいずれかが1未満です。
            ValueError: 存在しないパラメーターを固定しようとしています。
        """
        if self.reps < 1 or self.substeps < 1 or self.restarts < 1:
            raise ValueError("複製の数、ステップ数、開始点の数のいずれかが1未満です。")
        unknown = set(self.fixed) - set(BR_PARAMETER_NAMES)
        if unknown:
            raise ValueError(
                f"存在しないパラメーターを固定しようとしています: {sorted(unknown)}"
            )
