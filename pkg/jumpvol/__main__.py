import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

from jumpvol import DATABASE_FILE_NAME, VERSION, connect_to_database
from jumpvol.common.errors import StageError
from jumpvol.domain.models.options import ModelFamily, OptionKind
from jumpvol.domain.models.runs import RunConfig
from jumpvol.domain.models.svcj import ModelFlavor
from jumpvol.domain.repositories import RepositoryManager
from jumpvol.infra.config import ENV_PREFIX, describe_keys, load_config
from jumpvol.infra.repositories import RepositoryManagerImpl
from jumpvol.usecases.baselines import fit_arima_model, fit_garch_models
from jumpvol.usecases.estimation import fit_model, flag_jumps, residual_diagnostics
from jumpvol.usecases.highfreq import (
    calibrate_br,
    estimate_cross_moments,
    estimate_spot_variance,
)
from jumpvol.usecases.pipeline import run_pipeline
from jumpvol.usecases.pricing import implied_vol_surface, price_option, price_table
from jumpvol.usecases.simulate import simulate_returns

logger = logging.getLogger("jumpvol")

# 終了コード
EXIT_OK = 0
EXIT_FAILURE = 1

Command = Callable[[RepositoryManager, RunConfig, argparse.Namespace], List[str]]

T = TypeVar("T")


def _pricing(
    usecase: Callable[[RepositoryManager, RunConfig, bool, bool], List[str]],
) -> Command:
    return lambda rm, cfg, args: usecase(rm, cfg, args.from_fit, args.from_nimm)


# サブコマンドとユースケース
COMMANDS: Dict[str, Command] = {
    "simulate": lambda rm, cfg, args: simulate_returns(rm, cfg),
    "fit": lambda rm, cfg, args: fit_model(rm, cfg),
    "detect-jumps": lambda rm, cfg, args: flag_jumps(rm, cfg),
    "residuals": lambda rm, cfg, args: residual_diagnostics(rm, cfg),
    "spotvar": lambda rm, cfg, args: estimate_spot_variance(rm, cfg),
    "crossmom": lambda rm, cfg, args: estimate_cross_moments(rm, cfg),
    "nimm": lambda rm, cfg, args: calibrate_br(rm, cfg),
    "price": _pricing(price_option),
    "price-grid": _pricing(price_table),
    "iv-surface": _pricing(implied_vol_surface),
    "fit-garch": lambda rm, cfg, args: fit_garch_models(rm, cfg),
    "fit-arima": lambda rm, cfg, args: fit_arima_model(rm, cfg),
}

COMMAND_HELP: Dict[str, str] = {
    "simulate": "SVCJモデルの日次リターンをシミュレーションする",
    "fit": "SV、SVJ、SVCJモデルをMCMCで推定する",
    "detect-jumps": "推定したジャンプ確率からジャンプを判定する",
    "residuals": "推定したモデルの標準化残差を計算する",
    "spotvar": "高頻度価格からスポット分散を推定する",
    "crossmom": "無限小交差モーメントをカーネル推定する",
    "nimm": "交差モーメントに合わせてBRモデルを推定する",
    "price": "ヨーロピアン・オプションの価格を計算する",
    "price-grid": "権利行使価格 x 満期の価格表を計算する",
    "iv-surface": "インプライド・ボラティリティ曲面を計算する",
    "fit-garch": "t-GARCH(1,1)とt-EGARCH(1,1)を推定する",
    "fit-arima": "ARMA(p, q)を推定する",
}


def _common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", help="設定ファイルのパス")
    parser.add_argument("-o", "--output-dir", help="出力ディレクトリ ([core] output_dir)")
    parser.add_argument("--seed", type=int, help="乱数シード ([core] seed)")
    parser.add_argument("--threads", type=int, help="スレッド数 ([core] threads)")
    parser.add_argument("--prices", help="日次価格ファイル ([core] prices_path)")
    parser.add_argument("--intraday", help="高頻度価格ファイル ([core] intraday_path)")
    parser.add_argument("-v", "--verbose", action="store_true", help="詳細なログを出力する")


def build_parser() -> argparse.ArgumentParser:
    """コマンドライン引数のパーサーを構築する。

    Returns:
        argparse.ArgumentParser: パーサー
    """
    epilog = "\n".join(
        ["設定ファイルのキーと既定値:"]
        + [f"  {line}" for line in describe_keys()]
        + [
            "",
            f"環境変数 {ENV_PREFIX}<SECTION>__<KEY> は設定ファイルの値を上書きする。",
        ]
    )
    parser = argparse.ArgumentParser(
        prog="jumpvol",
        description="ジャンプを含む確率ボラティリティモデルの推定とオプション価格計算",
        epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=VERSION)
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, text in COMMAND_HELP.items():
        sub = subparsers.add_parser(name, help=text, description=text)
        _common_arguments(sub)
        if name in ("simulate", "fit"):
            sub.add_argument(
                "--flavor", choices=[f.value for f in ModelFlavor], help="モデルの種類"
            )
        if name == "simulate":
            sub.add_argument("--horizon", type=int, help="日数 ([simulate] horizon)")
        if name == "fit":
            sub.add_argument("--iterations", type=int, help="反復回数")
            sub.add_argument("--burn-in", type=int, help="破棄する初期反復回数")
            sub.add_argument("--chains", type=int, help="連鎖の数")
        if name in ("price", "price-grid", "iv-surface"):
            sub.add_argument(
                "--model", choices=[m.value for m in ModelFamily], help="モデルの系統"
            )
            sub.add_argument("--paths", type=int, help="経路数 ([pricing] paths)")
            sub.add_argument(
                "--br-dt", type=float, help="BRモデルのステップ幅 ([pricing] br_dt)"
            )
            sub.add_argument("--spot", type=float, help="原資産価格")
            sub.add_argument("--rate", type=float, help="1日当たりの無リスク金利")
            sub.add_argument(
                "--kind", choices=[k.value for k in OptionKind], help="オプションの種類"
            )
            sub.add_argument(
                "--from-fit", action="store_true", help="MCMCの推定結果を使う"
            )
            sub.add_argument(
                "--from-nimm", action="store_true", help="NIMMの推定結果を使う"
            )
        if name == "price":
            sub.add_argument("--strike", type=float, help="権利行使価格")
            sub.add_argument("--tau", type=int, help="満期までの日数")

    run = subparsers.add_parser(
        "run", help="設定したステージを順に実行する", description="パイプラインを実行する"
    )
    _common_arguments(run)
    run.add_argument("--stages", help="実行するステージ (カンマ区切り)")
    run.add_argument("--force", action="store_true", help="最新でも再実行する")
    return parser


def _override(section: T, **values: object) -> T:
    given = {k: v for k, v in values.items() if v is not None}
    return replace(section, **given) if given else section


def apply_arguments(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    """コマンドライン引数で実行設定を上書きする。

    Args:
        cfg (RunConfig): 実行設定
        args (argparse.Namespace): コマンドライン引数

    Returns:
        RunConfig: 上書きした実行設定
    """
    opt = vars(args)
    core = _override(
        cfg.core,
        output_dir=args.output_dir,
        seed=args.seed,
        threads=args.threads,
        prices_path=args.prices,
        intraday_path=args.intraday,
    )
    flavor = ModelFlavor(opt["flavor"]) if opt.get("flavor") else None
    simulate = cfg.simulate
    mcmc = cfg.mcmc
    if args.command == "simulate":
        simulate = _override(simulate, flavor=flavor, horizon=opt.get("horizon"))
    if args.command == "fit":
        mcmc = _override(
            mcmc,
            flavor=flavor,
            iterations=opt.get("iterations"),
            burn_in=opt.get("burn_in"),
            chains=opt.get("chains"),
        )
    pricing = _override(
        cfg.pricing,
        model=ModelFamily(opt["model"]) if opt.get("model") else None,
        kind=OptionKind(opt["kind"]) if opt.get("kind") else None,
        paths=opt.get("paths"),
        br_dt=opt.get("br_dt"),
        spot=opt.get("spot"),
        rate=opt.get("rate"),
        strike=opt.get("strike"),
        tau=opt.get("tau"),
    )
    pipeline = cfg.pipeline
    if opt.get("stages"):
        stages = [s.strip() for s in opt["stages"].split(",") if s.strip()]
        pipeline = replace(pipeline, stages=stages)
    return replace(
        cfg,
        core=core,
        simulate=simulate,
        mcmc=mcmc,
        pricing=pricing,
        pipeline=pipeline,
    )


def configure_logging(verbose: bool) -> None:
    """標準エラー出力にログを出力するように設定する。

    Args:
        verbose (bool): DEBUGレベルのログを出力するか
    """
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
    )
    root = logging.getLogger("jumpvol")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    """コマンドラインから実行する。

    結果は標準出力にJSONで出力し、ログとエラーは標準エラー出力に出力する。

    Args:
        argv (Optional[Sequence[str]]): コマンドライン引数 (Noneの場合はsys.argv)

    Returns:
        int: 終了コード
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        cfg = apply_arguments(load_config(args.config), args)
        os.makedirs(cfg.core.output_dir, exist_ok=True)
        # 実行記録データベースに接続
        conn = connect_to_database(
            os.path.join(cfg.core.output_dir, DATABASE_FILE_NAME)
        )
        try:
            repo_manager = RepositoryManagerImpl(conn)
            if args.command == "run":
                manifest = run_pipeline(repo_manager, cfg, args.force)
                result = {
                    "config_hash": manifest.config_hash,
                    "up_to_date": manifest.up_to_date,
                    "completed_stages": manifest.completed_stages,
                    "outputs": manifest.output_paths,
                }
            else:
                result = {"outputs": COMMANDS[args.command](repo_manager, cfg, args)}
        finally:
            conn.close()
    except StageError as e:
        logger.error("ステージ%sが失敗しました: %s", e.stage, e.__cause__ or e)
        return EXIT_FAILURE
    except (ValueError, ArithmeticError, RuntimeError, OSError) as e:
        logger.error("%s", e)
        return EXIT_FAILURE
    json.dump(result, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
