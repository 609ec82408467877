# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Command Line
# ═══════════════════════════════════════════════════════════════
"""
命令行入口

    python -m experiments train --data data/a6a --test data/a6a.t --rounds 100 --depth 3 --strategy ap
    python -m experiments compare --data data/w4a --strategy ap --strategy qb --jobs 2
    python -m experiments depths --data data/a6a --rounds 500 --depth 1 --depth 2 --depth 3
    python -m experiments lowerbound --data toy.svm --rounds 20
    python -m experiments gapplot --csv run.csv --data toy.svm
    python -m experiments synth --n 500 --k 20 --out synth.svm

退出码: 0 成功，2 参数错误，3 I/O 或解析错误，4 精确下界超时（CSV 仍会写出）
"""

from __future__ import annotations

from pathlib import Path
from statistics import mean
from typing import Any, Callable, List, Optional, Sequence

import click
from pydantic import ValidationError

from core.boosting import TIMEOUT_SENTINEL
from core.dataset import load_dataset
from core.errors import ArgumentError, BoundTimeoutError, DatasetParseError, ModelFormatError
from experiments import formatter
from experiments.compare import compare as run_compare
from experiments.compare import comparison_csv, depth_csv, depth_sweep
from experiments.gap import gap_csv
from experiments.runner import ExperimentConfig, ExperimentResult, run_experiment, write_atomic
from experiments.synthetic import FEATURE_KINDS, SyntheticDataGenerator, SyntheticSpec
from utils.config import ConfigManager
from utils.logger import configure_logging, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_IO = 3
EXIT_TIMEOUT = 4

STRATEGY_CHOICES = ["ap", "qb", "classic", "adaptive", "quickboost", "exhaustive"]


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        write_atomic(out, text)


def run_options(func: Callable) -> Callable:
    """train / compare / lowerbound 共用的训练参数"""
    options = [
        click.option("--data", type=click.Path(path_type=Path), required=True, help="训练集 (svmlight)"),
        click.option("--test", type=click.Path(path_type=Path), default=None, help="测试集 (svmlight)"),
        click.option("--dim", type=int, default=None, help="声明的特征维度"),
        click.option("--rounds", type=int, default=None, help="提升轮数"),
        click.option("--variant", type=str, default=None, help="none | lazy=Q | trim=Q"),
        click.option("--seed", type=int, default=None),
        click.option("--qb-batches", type=int, default=None, help="Quick Boost 批次数"),
        click.option("--qb-init-mass", type=float, default=None, help="Quick Boost 初始权重比例"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.option("--log-level", default=None, help="控制台日志级别 (DEBUG/INFO/WARNING)")
def cli(log_level: Optional[str]) -> None:
    """精确贪心最优决策桩提升: 训练、对比与下界实验"""
    settings = ConfigManager().get_logging_config()
    configure_logging(log_level or settings["level"], settings["dir"] if settings["file"] else None)


# ═══════════════════════════════════════════════════════════════
# TRAIN
# ═══════════════════════════════════════════════════════════════

@cli.command()
@run_options
@click.option("--depth", type=int, default=None, help="树深度")
@click.option("--strategy", type=click.Choice(STRATEGY_CHOICES), default=None)
@click.option("--lb", type=click.Choice(["none", "wo", "exact"]), default=None, help="逐轮下界")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="CSV 输出（默认 stdout）")
@click.option("--model-out", type=click.Path(path_type=Path), default=None, help="模型文本输出")
def train(**kwargs: Any) -> int:
    """训练并输出逐轮 CSV"""
    cfg = ExperimentConfig.from_defaults(**kwargs)
    result = run_experiment(cfg)
    if cfg.out is None:
        click.echo(result.csv_text(), nl=False)
    formatter.show(formatter.history_table(result.history, title=f"{cfg.strategy.value} / {cfg.data.name}"))
    return EXIT_TIMEOUT if result.timed_out else EXIT_OK


# ═══════════════════════════════════════════════════════════════
# COMPARE
# ═══════════════════════════════════════════════════════════════

@cli.command()
@run_options
@click.option("--depth", type=int, default=None)
@click.option("--strategy", "strategies", type=click.Choice(STRATEGY_CHOICES), multiple=True,
              help="可重复；默认 ap qb classic")
@click.option("--jobs", type=int, default=1, show_default=True, help="并行进程数")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="汇总 CSV 输出（默认 stdout）")
def compare(strategies: Sequence[str], jobs: int, out: Optional[Path], **kwargs: Any) -> int:
    """对比多个策略的累计评估次数与耗时"""
    if jobs < 1:
        raise click.UsageError("--jobs 必须 >= 1")
    names = list(strategies) or ["ap", "qb", "classic"]
    cfgs = [ExperimentConfig.from_defaults(strategy=name, **kwargs) for name in names]
    rows = run_compare(cfgs, jobs=jobs)
    _emit(comparison_csv(rows), out)
    formatter.show(formatter.comparison_table(rows))
    return EXIT_OK


@cli.command()
@run_options
@click.option("--depth", "depths", type=int, multiple=True, help="可重复；默认 1 2 3")
@click.option("--strategy", "strategies", type=click.Choice(STRATEGY_CHOICES), multiple=True,
              help="可重复；默认 ap qb（穷举基线总会运行）")
@click.option("--jobs", type=int, default=1, show_default=True, help="并行进程数")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="CSV 输出（默认 stdout）")
def depths(depths: Sequence[int], strategies: Sequence[str], jobs: int, out: Optional[Path], **kwargs: Any) -> int:
    """在多个树深度上对比各策略相对穷举搜索节省的评估数"""
    if jobs < 1:
        raise click.UsageError("--jobs 必须 >= 1")
    base = ExperimentConfig.from_defaults(**kwargs)
    rows = depth_sweep(base, depths or (1, 2, 3), strategies or ("ap", "qb"), jobs=jobs)
    _emit(depth_csv(rows), out)
    formatter.show(formatter.depth_table(rows))
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════
# LOWER BOUNDS
# ═══════════════════════════════════════════════════════════════

def bound_ratios(result: ExperimentResult) -> tuple:
    """(adaptive / LB_wo 均值, LB_wo / LB_exact 均值, 超时轮数)"""
    ap_wo: List[float] = []
    wo_exact: List[float] = []
    timeouts = 0
    for m in result.history:
        if m.lb_wo:
            ap_wo.append(m.assess_round / m.lb_wo)
        if m.lb_exact == TIMEOUT_SENTINEL:
            timeouts += 1
        elif m.lb_exact and m.lb_wo:
            wo_exact.append(m.lb_wo / m.lb_exact)
    return (mean(ap_wo) if ap_wo else None, mean(wo_exact) if wo_exact else None, timeouts)


@cli.command()
@run_options
@click.option("--lb", type=click.Choice(["wo", "exact"]), default="exact", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="CSV 输出（默认 stdout）")
def lowerbound(**kwargs: Any) -> int:
    """深度 1 的自适应训练，逐轮计算下界并报告比值"""
    cfg = ExperimentConfig.from_defaults(depth=1, strategy="adaptive", **kwargs)
    result = run_experiment(cfg)
    if cfg.out is None:
        click.echo(result.csv_text(), nl=False)
    ap_wo, wo_exact, timeouts = bound_ratios(result)
    formatter.show(formatter.ratio_table(ap_wo, wo_exact, len(result.history), timeouts))
    return EXIT_TIMEOUT if result.timed_out else EXIT_OK


@cli.command()
@click.option("--csv", "csv_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--data", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True,
              help="训练集，用于得到 n·K")
@click.option("--dim", type=int, default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None)
def gapplot(csv_path: Path, data: Path, dim: Optional[int], out: Optional[Path]) -> int:
    """把逐轮 CSV 转换为下界间隙比例"""
    dataset = load_dataset(data, dim)
    text = csv_path.read_text(encoding="utf-8")
    _emit(gap_csv(text, dataset.n * dataset.K), out)
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════
# SYNTHETIC DATA
# ═══════════════════════════════════════════════════════════════

@cli.command()
@click.option("--n", "n", type=int, default=500, show_default=True)
@click.option("--k", "K", type=int, default=20, show_default=True)
@click.option("--informative", type=int, default=None)
@click.option("--kind", type=click.Choice(list(FEATURE_KINDS)), default="mixed", show_default=True)
@click.option("--noise", type=float, default=0.05, show_default=True)
@click.option("--density", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
def synth(out: Optional[Path], **kwargs: Any) -> int:
    """生成可复现的合成二分类数据集"""
    spec = SyntheticSpec(**kwargs)
    _emit(SyntheticDataGenerator(spec).generate_text(), out)
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════
# ENTRY POINT
# ═══════════════════════════════════════════════════════════════

def main(argv: Optional[Sequence[str]] = None) -> int:
    """运行 CLI 并把异常映射为退出码"""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None,
                      prog_name="experiments", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_ARGUMENT
    except click.exceptions.Abort:
        return EXIT_ARGUMENT
    except (DatasetParseError, ModelFormatError, OSError) as e:
        logger.error(f"读取失败: {e}")
        return EXIT_IO
    except ValidationError as e:
        logger.error(f"参数错误: {e}")
        return EXIT_ARGUMENT
    except ArgumentError as e:
        logger.error(f"参数错误: {e}")
        return EXIT_ARGUMENT
    except BoundTimeoutError as e:
        logger.error(f"下界超时: {e}")
        return EXIT_TIMEOUT
    return rv if isinstance(rv, int) else EXIT_OK


