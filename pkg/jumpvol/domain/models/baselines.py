import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArimaParams:
    """ARMA(p, q)のパラメーター"""

    # 切片
    c: float
    # AR係数
    a: np.ndarray
    # MA係数
    b: np.ndarray
    # イノベーションの分散
    sigma2: float

    def __post_init__(self) -> None:
        """パラメーターを検証する。

        Raises:
            ValueError: イノベーションの分散が正ではありません。
        """
        if not self.sigma2 > 0:
            raise ValueError("イノベーションの分散が正ではありません。")
        if not self.is_stationary():
            logger.warning("AR多項式の根が単位円の内側にあります。")

    @property
    def p(self) -> int:
        """AR次数を返す。

        Returns:
            int: AR次数
        """
        return len(self.a)

    @property
    def q(self) -> int:
        """MA次数を返す。

        Returns:
            int: MA次数
        """
        return len(self.b)

    def is_stationary(self) -> bool:
        """AR多項式 1 - a1 z - ... - ap z^p の根が単位円の外側にあるか確認する。

        Returns:
            bool: 定常な場合はTrue
        """
        return _roots_outside_unit_circle(-np.asarray(self.a, dtype=float))

    def is_invertible(self) -> bool:
        """MA多項式 1 + b1 z + ... + bq z^q の根が単位円の外側にあるか確認する。

        Returns:
            bool: 反転可能な場合はTrue
        """
        return _roots_outside_unit_circle(np.asarray(self.b, dtype=float))


def _roots_outside_unit_circle(coefficients: np.ndarray) -> bool:
    """多項式 1 + c1 z + ... + cn z^n の根がすべて単位円の外側にあるか確認する。

    Args:
        coefficients (np.ndarray): c1からcnまでの係数

    Returns:
        bool: 単位円の外側にある場合はTrue
    """
    if len(coefficients) == 0 or np.all(coefficients == 0):
        return True
    # np.rootsは最高次の係数から受け取る
    roots = np.roots(np.concatenate((coefficients[::-1], [1.0])))
    return bool(np.all(np.abs(roots) > 1.0))


@dataclass(frozen=True)
class TGarchParams:
    """t-GARCH(1,1)のパラメーター"""

    # 分散の切片
    omega: float
    # ARCH係数
    alpha1: float
    # GARCH係数
    beta1: float
    # t分布の自由度
    nu: float
    # 平均
    mu: float = 0.0

    def __post_init__(self) -> None:
        """パラメーターを検証する。

        Raises:
            ValueError: omegaが正ではありません。
            ValueError: alpha1またはbeta1が負です。
            ValueError: alpha1とbeta1の和が1以上です。
            ValueError: 自由度が2以下です。
        """
        if not self.omega > 0:
            raise ValueError("omegaが正ではありません。")
        if self.alpha1 < 0 or self.beta1 < 0:
            raise ValueError("alpha1またはbeta1が負です。")
        if not self.alpha1 + self.beta1 < 1:
            raise ValueError("alpha1とbeta1の和が1以上です。")
        if not self.nu > 2:
            raise ValueError("自由度が2以下です。")

    def unconditional_variance(self) -> float:
        """無条件分散を返す。

        Returns:
            float: omega / (1 - alpha1 - beta1)
        """
        return self.omega / (1.0 - self.alpha1 - self.beta1)


@dataclass(frozen=True)
class TEgarchParams:
    """t-EGARCH(1,1)のパラメーター"""

    # 対数分散の切片
    omega: float
    # 符号の効果
    alpha1: float
    # 対数分散の自己回帰係数
    beta1: float
    # 大きさの効果
    phi1: float
    # t分布の自由度
    nu: float
    # 平均
    mu: float = 0.0

    def __post_init__(self) -> None:
        """パラメーターを検証する。

        Raises:
            ValueError: beta1の絶対値が1以上です。
            ValueError: 自由度が2以下です。
        """
        if not abs(self.beta1) < 1:
            raise ValueError("beta1の絶対値が1以上です。")
        if not self.nu > 2:
            raise ValueError("自由度が2以下です。")

    def unconditional_log_variance(self) -> float:
        """対数分散の無条件平均を返す。

        Returns:
            float: omega / (1 - beta1)
        """
        return self.omega / (1.0 - self.beta1)


@dataclass
class FitReport:
    """最尤推定の結果"""

    # パラメーター名と推定値
    estimates: Dict[str, float]
    # ロバスト標準誤差
    std_errors: Dict[str, float]
    # 最大対数尤度
    loglik: float
    # 観測数
    nobs: int
    # 最適化が収束したか
    converged: bool = True
    # 推定値が制約の境界にあるか
    at_boundary: bool = False
    # 標準化残差
    residuals: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def aic(self) -> float:
        """赤池情報量規準を返す。

        Returns:
            float: AIC
        """
        return -2.0 * self.loglik + 2.0 * len(self.estimates)

    @property
    def bic(self) -> float:
        """ベイズ情報量規準を返す。

        Returns:
            float: BIC
        """
        return -2.0 * self.loglik + np.log(self.nobs) * len(self.estimates)
