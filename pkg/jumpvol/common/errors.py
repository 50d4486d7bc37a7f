from typing import Any, Dict, Optional


class InvalidInputError(ValueError):
    """入力値が前提条件を満たさない"""


class DegenerateWindowError(ValueError):
    """閾値付きバイパワー変動の窓で、有効なリターンが不足している"""


class DegenerateInputError(ValueError):
    """分散が0の系列など、推定できない入力"""


class NoSolutionError(ValueError):
    """インプライド・ボラティリティが存在しない"""

    # 違反した無裁定価格帯の境界
    bound: float

    def __init__(self, message: str, bound: float) -> None:
        """イニシャライザ

        Args:
            message (str): エラーメッセージ
            bound (float): 違反した無裁定価格帯の境界
        """
        super().__init__(message)
        self.bound = bound


class NumericalError(ArithmeticError):
    """数値計算が破綻した"""


class InitializationError(RuntimeError):
    """MCMCの初期状態で尤度が有限でない"""

    # 診断用の初期状態
    state: Dict[str, Any]

    def __init__(self, message: str, state: Optional[Dict[str, Any]] = None) -> None:
        """イニシャライザ

        Args:
            message (str): エラーメッセージ
            state (Optional[Dict[str, Any]]): 診断用の初期状態
        """
        super().__init__(message)
        self.state = state or {}


class StageError(RuntimeError):
    """パイプラインのステージが失敗した"""

    # 失敗したステージ名
    stage: str

    def __init__(self, message: str, stage: str) -> None:
        """イニシャライザ

        Args:
            message (str): エラーメッセージ
            stage (str): 失敗したステージ名
        """
        super().__init__(message)
        self.stage = stage
