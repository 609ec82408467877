# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Strategy Comparison
# ═══════════════════════════════════════════════════════════════
"""
多配置对比 - 累计评估次数与耗时，以及相对基线的改进

改进定义为 1 - 参照/基线，参照为第一个自适应配置（没有时取第一个配置）。
深度扫描对每个深度分别运行穷举基线与各策略，报告节省的绝对评估数。
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from core.boosting import LowerBoundMode
from core.errors import ArgumentError
from core.stump_search import Strategy
from experiments.runner import ExperimentConfig, run_experiment
from utils.logger import get_logger

logger = get_logger(__name__)

SUMMARY_HEADER = "label,strategy,variant,assess_cum,wall_ms,train_err,test_err,assess_improv,time_improv"
DEPTH_HEADER = "depth,strategy,assess_cum,saved,assess_improv"


@dataclass(frozen=True)
class RunSummary:
    label: str
    strategy: str
    variant: str
    assess_cum: int
    wall_ms: float
    train_err: float
    test_err: Optional[float]


@dataclass(frozen=True)
class ComparisonRow:
    summary: RunSummary
    assess_improvement: float
    time_improvement: float


def improvement(reference: float, baseline: float) -> float:
    """1 - reference / baseline；基线为 0 时记 0"""
    if baseline == 0:
        return 0.0
    return 1.0 - reference / baseline


def summarize_run(cfg: ExperimentConfig) -> RunSummary:
    """运行单个配置并汇总（进程池中执行，须为模块级函数）"""
    result = run_experiment(cfg)
    last = result.history[-1]
    return RunSummary(
        label=f"{cfg.strategy.short}/{cfg.variant}",
        strategy=cfg.strategy.value,
        variant=cfg.variant,
        assess_cum=result.total_assessments,
        wall_ms=result.total_wall_ms,
        train_err=last.train_err,
        test_err=last.test_err,
    )


def _check_compatible(cfgs: Sequence[ExperimentConfig]) -> None:
    if not cfgs:
        raise ArgumentError("至少需要一个配置")
    first = cfgs[0]
    for cfg in cfgs[1:]:
        if (cfg.data, cfg.test, cfg.rounds, cfg.depth) != (first.data, first.test, first.rounds, first.depth):
            raise ArgumentError("对比的配置必须使用相同的数据集、轮数和深度")


def _run_all(cfgs: Sequence[ExperimentConfig], jobs: int) -> List[RunSummary]:
    if jobs > 1 and len(cfgs) > 1:
        logger.info(f"并行运行 {len(cfgs)} 个配置 (jobs={jobs})")
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(summarize_run, cfgs))
    return [summarize_run(cfg) for cfg in cfgs]


def compare(cfgs: Sequence[ExperimentConfig], jobs: int = 1) -> List[ComparisonRow]:
    """
    运行全部配置并计算参照配置相对每个配置的改进

    Raises:
        ArgumentError: 配置之间数据集/轮数/深度不一致
    """
    _check_compatible(cfgs)
    summaries = _run_all(cfgs, jobs)

    reference = next((s for s in summaries if s.strategy == Strategy.ADAPTIVE.value), summaries[0])
    return [
        ComparisonRow(
            summary=s,
            assess_improvement=improvement(reference.assess_cum, s.assess_cum),
            time_improvement=improvement(reference.wall_ms, s.wall_ms),
        )
        for s in summaries
    ]


def comparison_csv(rows: Sequence[ComparisonRow]) -> str:
    lines = [SUMMARY_HEADER]
    for row in rows:
        s = row.summary
        test_err = "" if s.test_err is None else f"{s.test_err:.6f}"
        lines.append(
            f"{s.label},{s.strategy},{s.variant},{s.assess_cum},{s.wall_ms:.3f},"
            f"{s.train_err:.6f},{test_err},{row.assess_improvement:.6f},{row.time_improvement:.6f}"
        )
    return "\n".join(lines) + "\n"


# ═══════════════════════════════════════════════════════════════
# DEPTH SWEEP
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class DepthRow:
    """
    某个深度上一个策略的累计评估数

    Attributes:
        saved: 穷举基线的累计评估数减去本策略的累计评估数
        improvement: 1 - 本策略 / 穷举基线
    """
    depth: int
    strategy: str
    assess_cum: int
    saved: int
    improvement: float


def depth_sweep(base: ExperimentConfig, depths: Iterable[int],
                strategies: Sequence[Strategy] = (Strategy.ADAPTIVE, Strategy.QUICKBOOST),
                jobs: int = 1) -> List[DepthRow]:
    """
    在多个树深度上运行同一数据集，记录每个策略相对穷举搜索节省的评估数

    下界计算在扫描中关闭。每个深度都额外运行一次穷举基线，基线行的 saved 为 0。

    Raises:
        ArgumentError: 深度列表为空或包含 < 1 的深度
    """
    depths = sorted(set(int(d) for d in depths))
    if not depths or depths[0] < 1:
        raise ArgumentError(f"深度必须为正且至少一个: {depths}")
    order = [Strategy.EXHAUSTIVE]
    for strategy in map(Strategy.parse, strategies):
        if strategy not in order:
            order.append(strategy)

    cfgs = [
        ExperimentConfig(**{**base.model_dump(), "depth": depth, "strategy": strategy,
                            "lb": LowerBoundMode.NONE, "out": None, "model_out": None})
        for depth in depths
        for strategy in order
    ]
    summaries = _run_all(cfgs, jobs)

    rows: List[DepthRow] = []
    for i, depth in enumerate(depths):
        group = summaries[i * len(order):(i + 1) * len(order)]
        baseline = group[0].assess_cum
        for s in group:
            rows.append(DepthRow(depth, s.strategy, s.assess_cum, baseline - s.assess_cum,
                                 improvement(s.assess_cum, baseline)))
        logger.info(f"深度 {depth}: 穷举 {baseline:,} 次评估")
    return rows


def depth_csv(rows: Sequence[DepthRow]) -> str:
    lines = [DEPTH_HEADER]
    lines.extend(f"{r.depth},{r.strategy},{r.assess_cum},{r.saved},{r.improvement:.6f}" for r in rows)
    return "\n".join(lines) + "\n"
