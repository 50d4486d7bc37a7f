import os

from jumpvol.common import RngStream
from jumpvol.common.errors import InvalidInputError
from jumpvol.domain.models.intraday import IntradayPanel
from jumpvol.domain.models.runs import STAGE_STREAMS, RunConfig
from jumpvol.domain.models.series import ReturnSeries
from jumpvol.domain.repositories import RepositoryManager

# シミュレーションしたリターンのファイル名
SIMULATED_FILE_NAME = "simulated.csv"

# 推定した連鎖を保存するディレクトリ名
FIT_DIR_NAME = "fit"


def stage_stream(cfg: RunConfig, stage: str) -> RngStream:
    """ステージに割り当てた乱数ストリームを返す。

    Args:
        cfg (RunConfig): 実行設定
        stage (str): ステージ名

    Returns:
        RngStream: 乱数ストリーム
    """
    return RngStream(cfg.core.seed, STAGE_STREAMS[stage])


def output_path(cfg: RunConfig, name: str) -> str:
    """出力ディレクトリ内のパスを返す。

    Args:
        cfg (RunConfig): 実行設定
        name (str): ファイル名またはディレクトリ名

    Returns:
        str: パス
    """
    return os.path.join(cfg.core.output_dir, name)


def daily_returns(repo_manager: RepositoryManager, cfg: RunConfig) -> ReturnSeries:
    """日次対数リターンを読み込む。

    日次価格ファイルが指定されていない場合は、シミュレーションしたリターンを読み込む。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Raises:
        InvalidInputError: 日次価格ファイルもシミュレーションしたリターンもありません。

    Returns:
        ReturnSeries: リターン系列
    """
    repo = repo_manager.price_series()
    if cfg.core.prices_path is not None:
        return repo.load_returns(cfg.core.prices_path)
    path = output_path(cfg, SIMULATED_FILE_NAME)
    if not os.path.isfile(path):
        raise InvalidInputError(
            "日次価格ファイルもシミュレーションしたリターンもありません。"
        )
    return repo.load_returns(path)


def intraday_panel(repo_manager: RepositoryManager, cfg: RunConfig) -> IntradayPanel:
    """高頻度価格を読み込む。

    Args:
        repo_manager (RepositoryManager): リポジトリマネージャー
        cfg (RunConfig): 実行設定

    Raises:
        InvalidInputError: 高頻度価格ファイルが指定されていません。

    Returns:
        IntradayPanel: パネル
    """
    if cfg.core.intraday_path is None:
        raise InvalidInputError("高頻度価格ファイルが指定されていません。")
    return repo_manager.intraday().load(
        cfg.core.intraday_path, cfg.highfreq.minutes_per_knot
    )
