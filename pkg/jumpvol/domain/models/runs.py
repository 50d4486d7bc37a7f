from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from jumpvol.domain.models.br import Restriction
from jumpvol.domain.models.options import (
    DEFAULT_PATHS,
    ModelFamily,
    OptionKind,
    V0Policy,
)
from jumpvol.domain.models.svcj import ModelFlavor

# パイプラインのステージ (実行順)
STAGES: List[str] = [
    "simulate",
    "fit",
    "price",
    "price_grid",
    "iv_surface",
    "spotvar",
    "crossmom",
    "nimm",
    "fit_arima",
    "fit_garch",
]

# ステージごとの乱数サブストリーム番号
STAGE_STREAMS: Dict[str, int] = {stage: i for i, stage in enumerate(STAGES)}

# ステージが依存するステージ
STAGE_DEPENDENCIES: Dict[str, List[str]] = {
    "crossmom": ["spotvar"],
    "nimm": ["crossmom"],
}

# 日次価格ファイルがない場合にシミュレーションしたリターンを入力とするステージ
DAILY_INPUT_STAGES: List[str] = ["fit", "fit_arima", "fit_garch"]

# 価格表の既定の権利行使価格
GRID_STRIKES: List[float] = [1250.0 + 100.0 * i for i in range(21)]

# 価格表の既定の満期 (日)
GRID_TAUS: List[int] = [1, 7, 30, 60, 90, 180, 360, 720]

# インプライド・ボラティリティ曲面の満期 (日)
SURFACE_TAUS: List[int] = [7, 30, 90, 365]


@dataclass
class CoreSection:
    """共通の設定"""

    # 日次価格ファイル (date,price)
    prices_path: Optional[str] = None
    # 高頻度価格ファイル (timestamp,price)
    intraday_path: Optional[str] = None
    # 出力ディレクトリ
    output_dir: str = "output"
    # 乱数シード
    seed: int = 0
    # スレッド数
    threads: int = 1


@dataclass
class SimulateSection:
    """シミュレーションの設定 (パーセント単位のSVCJパラメーター)"""

    flavor: ModelFlavor = ModelFlavor.SVCJ
    horizon: int = 2000
    # 初期分散 (Noneの場合は長期平均)
    v0: Optional[float] = None
    mu: float = 0.041
    mu_y: float = -0.084
    sigma_y: float = 2.155
    lam: float = 0.041
    alpha: float = 0.010
    beta: float = -0.132
    rho: float = 0.407
    sigma_v: float = 0.008
    rho_j: float = -0.573
    mu_v: float = 0.620


@dataclass
class McmcSection:
    """MCMCの設定"""

    flavor: ModelFlavor = ModelFlavor.SVCJ
    iterations: int = 5000
    burn_in: int = 1000
    mh_target_accept: float = 0.35
    latent_thin: int = 5
    chains: int = 1


@dataclass
class HighfreqSection:
    """高頻度推定の設定"""

    threshold_mult: float = 4.0
    minutes_per_knot: int = 60
    grid_points: int = 20
    # バンド幅 (Noneの場合は経験則)
    bandwidth: Optional[float] = None
    reps: int = 100000
    restriction: Restriction = Restriction.Full
    restarts: int = 3
    max_iterations: int = 2000
    # 推定せずに初期値に固定するBRパラメーター
    fixed: List[str] = field(default_factory=list)


@dataclass
class PricingSection:
    """価格計算の設定"""

    # 価格計算に用いるモデル (svcjは[mcmc]のflavor、brは[highfreq]の推定値)
    model: ModelFamily = ModelFamily.Svcj
    kind: OptionKind = OptionKind.Call
    paths: int = DEFAULT_PATHS
    v0_policy: V0Policy = V0Policy.LongRunMean
    v0_value: Optional[float] = None
    spot: float = 2250.0
    rate: float = 0.0
    strike: float = 1250.0
    tau: int = 90
    strikes: List[float] = field(default_factory=lambda: list(GRID_STRIKES))
    taus: List[int] = field(default_factory=lambda: list(GRID_TAUS))
    moneyness: List[float] = field(
        default_factory=lambda: [round(0.8 + 0.05 * i, 2) for i in range(9)]
    )
    surface_taus: List[int] = field(default_factory=lambda: list(SURFACE_TAUS))
    chunk_size: int = 1000
    # BRモデルのシミュレーションのステップ幅 (日)
    br_dt: float = 1.0

    def __post_init__(self) -> None:
        """設定を検証する。

        Raises:
            ValueError: BRモデルのステップ幅が正ではありません。
        """
        if not self.br_dt > 0:
            raise ValueError("BRモデルのステップ幅が正ではありません。")


@dataclass
class BaselinesSection:
    """古典的な時系列モデルの設定"""

    arima_p: int = 2
    arima_q: int = 2
    ljung_box_lags: int = 10


@dataclass
class PipelineSection:
    """パイプラインの設定"""

    stages: List[str] = field(default_factory=lambda: ["simulate"])


@dataclass
class RunConfig:
    """パイプラインの実行設定

    各属性が設定ファイルのセクションに対応する。
    """

    core: CoreSection = field(default_factory=CoreSection)
    simulate: SimulateSection = field(default_factory=SimulateSection)
    mcmc: McmcSection = field(default_factory=McmcSection)
    # 事前分布のハイパーパラメーターの上書き
    priors: Dict[str, float] = field(default_factory=dict)
    highfreq: HighfreqSection = field(default_factory=HighfreqSection)
    pricing: PricingSection = field(default_factory=PricingSection)
    baselines: BaselinesSection = field(default_factory=BaselinesSection)
    pipeline: PipelineSection = field(default_factory=PipelineSection)

    def __post_init__(self) -> None:
        """設定を検証する。

        Raises:
            ValueError: 存在しないステージです。
        """
        unknown = set(self.pipeline.stages) - set(STAGES)
        if unknown:
            raise ValueError(f"存在しないステージです: {sorted(unknown)}")

    def ordered_stages(self) -> List[str]:
        """依存するステージを補い、実行順に並べたステージを返す。

        日次価格ファイルが指定されていない場合、日次リターンを使うステージは
        シミュレーションに依存する。

        Returns:
            List[str]: 実行するステージ
        """
        requested = set(self.pipeline.stages)
        if self.core.prices_path is None and requested & set(DAILY_INPUT_STAGES):
            requested.add("simulate")
        pending = list(requested)
        while pending:
            stage = pending.pop()
            for dependency in STAGE_DEPENDENCIES.get(stage, []):
                if dependency not in requested:
                    requested.add(dependency)
                    pending.append(dependency)
        return [stage for stage in STAGES if stage in requested]


@dataclass
class RunManifest:
    """パイプラインの実行記録"""

    # 設定と入力のハッシュ
    config_hash: str
    # ライブラリのバージョン
    artifact_version: str
    # 使用した乱数シード
    seeds: List[int]
    # 入力ファイルのチェックサム
    input_checksums: Dict[str, str]
    # 出力ファイルのパスとチェックサム
    outputs: List[Tuple[str, str]] = field(default_factory=list)
    # 完了したステージ
    completed_stages: List[str] = field(default_factory=list)
    # 全ステージが完了したか
    complete: bool = False
    # 既存の結果を再利用したか
    up_to_date: bool = False

    @property
    def output_paths(self) -> List[str]:
        """出力ファイルのパスを返す。

        Returns:
            List[str]: 出力ファイルのパス
        """
        return [path for path, _ in self.outputs]
