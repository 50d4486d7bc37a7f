from dataclasses import dataclass, field, fields
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from jumpvol.common import RngStream
from jumpvol.domain.models.svcj import (
    SVCJ_PARAMETER_NAMES,
    LatentPath,
    ModelFlavor,
    SvcjParams,
)


@dataclass(frozen=True)
class PriorSpec:
    """SVCJパラメーターの事前分布

    分散型のパラメーターには逆ガンマ分布IG(形状, 尺度)を用いる。
    """

    # mu ~ N(mu_mean, mu_var)
    mu_mean: float = 0.0
    mu_var: float = 25.0
    # (alpha, beta) ~ N(ab_mean, ab_var * I)
    alpha_mean: float = 0.0
    beta_mean: float = 0.0
    ab_var: float = 1.0
    # sigma_v^2 ~ IG(sigma_v2_shape, sigma_v2_scale)
    sigma_v2_shape: float = 2.5
    sigma_v2_scale: float = 0.1
    # mu_y ~ N(mu_y_mean, mu_y_var)
    mu_y_mean: float = 0.0
    mu_y_var: float = 100.0
    # sigma_y^2 ~ IG(sigma_y2_shape, sigma_y2_scale)
    sigma_y2_shape: float = 10.0
    sigma_y2_scale: float = 40.0
    # rho ~ U(-1, 1)
    # rho_j ~ N(rho_j_mean, rho_j_var)
    rho_j_mean: float = 0.0
    rho_j_var: float = 0.5
    # mu_v ~ IG(mu_v_shape, mu_v_scale)
    mu_v_shape: float = 10.0
    mu_v_scale: float = 20.0
    # lam ~ Beta(lam_a, lam_b)
    lam_a: float = 2.0
    lam_b: float = 40.0

    def __post_init__(self) -> None:
        """ハイパーパラメーターを検証する。

        Raises:
            ValueError: 分散、形状、尺度のハイパーパラメーターが正ではありません。
        """
        positive = [
            self.mu_var,
            self.ab_var,
            self.sigma_v2_shape,
            self.sigma_v2_scale,
            self.mu_y_var,
            self.sigma_y2_shape,
            self.sigma_y2_scale,
            self.rho_j_var,
            self.mu_v_shape,
            self.mu_v_scale,
            self.lam_a,
            self.lam_b,
        ]
        if any(not value > 0 for value in positive):
            raise ValueError(
                "分散、形状、尺度のハイパーパラメーターが正ではありません。"
            )

    def overridden(self, overrides: Dict[str, float]) -> "PriorSpec":
        """一部のハイパーパラメーターを上書きした事前分布を返す。

        Args:
            overrides (Dict[str, float]): ハイパーパラメーター名と値

        Raises:
            ValueError: 存在しないハイパーパラメーターです。

        Returns:
            PriorSpec: 上書きした事前分布
        """
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise ValueError(f"存在しないハイパーパラメーターです: {sorted(unknown)}")
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update({k: float(v) for k, v in overrides.items()})
        return PriorSpec(**values)

    @property
    def lam_mean(self) -> float:
        """ジャンプ強度の事前平均を返す。

        Returns:
            float: lam_a / (lam_a + lam_b)
        """
        return self.lam_a / (self.lam_a + self.lam_b)


@dataclass(frozen=True)
class McmcConfig:
    """MCMCの設定"""

    # 反復回数
    iterations: int = 5000
    # 破棄する初期反復回数
    burn_in: int = 1000
    # 適応的ランダムウォークの目標採択率
    mh_target_accept: float = 0.35
    # 乱数ストリーム
    seed: RngStream = field(default_factory=lambda: RngStream(0))
    # 潜在変数を保存する間隔
    latent_thin: int = 5

    def __post_init__(self) -> None:
        """設定を検証する。

        Raises:
            ValueError: 破棄する反復回数が反復回数以上です。
            ValueError: 目標採択率が0より大きく1未満ではありません。
            ValueError: 潜在変数を保存する間隔が1未満です。
        """
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("破棄する反復回数が反復回数以上です。")
        if not 0.0 < self.mh_target_accept < 1.0:
            raise ValueError("目標採択率が0より大きく1未満ではありません。")
        if self.latent_thin < 1:
            raise ValueError("潜在変数を保存する間隔が1未満です。")


@dataclass
class PosteriorChain:
    """MCMCで得たパラメーターと潜在変数の連鎖"""

    # モデルの種類
    flavor: ModelFlavor
    # 設定
    config: McmcConfig
    # 反復ごとのパラメーター (列はSVCJ_PARAMETER_NAMES)
    draws: pd.DataFrame
    # 間引いた潜在変数 (反復番号と潜在変数の組)
    latent_draws: List[Tuple[int, LatentPath]]
    # メトロポリス・ヘイスティングスのブロックごとの採択率 (バーンイン後)
    acceptance_rates: Dict[str, float]
    # バーンイン後の日ごとのジャンプ確率
    jump_probability: np.ndarray
    # バーンイン後の分散の事後平均 (V_0を含む)
    variance_mean: np.ndarray
    # ジャンプが起きた反復でのリターンジャンプサイズの平均
    jump_size_y_mean: np.ndarray
    # ジャンプが起きた反復での分散ジャンプサイズの平均
    jump_size_v_mean: np.ndarray

    def posterior_draws(self) -> pd.DataFrame:
        """バーンイン後のパラメーターを返す。

        Returns:
            pd.DataFrame: バーンイン後のパラメーター
        """
        return self.draws.iloc[self.config.burn_in :][SVCJ_PARAMETER_NAMES]


@dataclass
class PosteriorSummary:
    """事後分布の要約"""

    # パラメーターの事後平均
    mean: Dict[str, float]
    # パラメーターの事後標準偏差
    std: Dict[str, float]
    # 2.5%分位点
    quantile_025: Dict[str, float]
    # 97.5%分位点
    quantile_975: Dict[str, float]
    # 日ごとのジャンプ確率
    jump_probability: np.ndarray
    # 閾値で判定したジャンプ
    detected_jumps: np.ndarray
    # 分散の事後平均 (V_0を含む)
    variance_path: np.ndarray
    # リターンジャンプサイズの事後平均
    jump_size_y: np.ndarray
    # 分散ジャンプサイズの事後平均
    jump_size_v: np.ndarray
    # 平均二乗誤差
    mse: float = float("nan")
    # 派生量 (kappa、thetaなど) の事後平均
    derived: Dict[str, float] = field(default_factory=dict)

    def interval_contains(self, name: str, value: float) -> bool:
        """95%信用区間が値を含むか確認する。

        Args:
            name (str): パラメーター名
            value (float): 値

        Returns:
            bool: 含む場合はTrue
        """
        return self.quantile_025[name] <= value <= self.quantile_975[name]

    def posterior_params(self) -> SvcjParams:
        """事後平均をパラメーターとして返す。

        Returns:
            SvcjParams: 事後平均のパラメーター
        """
        return SvcjParams.from_dict(self.mean)
