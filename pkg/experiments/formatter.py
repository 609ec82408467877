# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Console Formatter
# ═══════════════════════════════════════════════════════════════
"""
终端汇总表（rich），输出到 stderr，不干扰 stdout 上的 CSV
"""

from __future__ import annotations

from typing import Optional, Sequence

from rich.console import Console
from rich.table import Table

from core.boosting import RoundMetrics
from experiments.compare import ComparisonRow, DepthRow

console = Console(stderr=True)


def _pct(value: float) -> str:
    return f"{value * 100:.1f}%"


def history_table(history: Sequence[RoundMetrics], title: str, every: int = 10) -> Table:
    """每隔 every 轮一行，最后一轮总是显示"""
    table = Table(title=title)
    for name in ("round", "assess_round", "assess_cum", "train_err", "test_err", "lb_wo", "lb_exact"):
        table.add_column(name, justify="right")
    for m in history:
        if m.round % every and m.round != len(history):
            continue
        table.add_row(
            str(m.round),
            str(m.assess_round),
            f"{m.assess_cum:,}",
            f"{m.train_err:.4f}",
            "-" if m.test_err is None else f"{m.test_err:.4f}",
            "-" if m.lb_wo is None else str(m.lb_wo),
            "-" if m.lb_exact is None else str(m.lb_exact),
        )
    return table


def comparison_table(rows: Sequence[ComparisonRow], title: str = "策略对比") -> Table:
    table = Table(title=title)
    for name in ("配置", "累计评估", "耗时 (ms)", "训练误差", "测试误差", "评估改进", "耗时改进"):
        table.add_column(name, justify="right")
    for row in rows:
        s = row.summary
        table.add_row(
            s.label,
            f"{s.assess_cum:,}",
            f"{s.wall_ms:,.0f}",
            f"{s.train_err:.4f}",
            "-" if s.test_err is None else f"{s.test_err:.4f}",
            _pct(row.assess_improvement),
            _pct(row.time_improvement),
        )
    return table


def depth_table(rows: Sequence[DepthRow], title: str = "深度扫描") -> Table:
    table = Table(title=title)
    for name in ("深度", "策略", "累计评估", "相对穷举节省", "评估改进"):
        table.add_column(name, justify="right")
    for r in rows:
        table.add_row(str(r.depth), r.strategy, f"{r.assess_cum:,}", f"{r.saved:,}", _pct(r.improvement))
    return table


def ratio_table(adaptive_over_wo: Optional[float], wo_over_exact: Optional[float],
                rounds: int, timeouts: int) -> Table:
    table = Table(title="下界比值")
    table.add_column("指标")
    table.add_column("值", justify="right")
    table.add_row("轮数", str(rounds))
    table.add_row("adaptive / LB_wo (均值)", "-" if adaptive_over_wo is None else f"{adaptive_over_wo:.4f}")
    table.add_row("LB_wo / LB_exact (均值)", "-" if wo_over_exact is None else f"{wo_over_exact:.4f}")
    table.add_row("精确下界超时轮数", str(timeouts))
    return table


def show(table: Table) -> None:
    console.print(table)
