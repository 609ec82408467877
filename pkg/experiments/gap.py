# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Gap Fraction Transform
# ═══════════════════════════════════════════════════════════════
"""
把逐轮 CSV 转成"下界间隙比例": (x - lb_exact) / (n·K - lb_exact)

0 表示与精确下界相同，1 表示与穷举搜索相同。没有有效 lb_exact 的轮次被跳过。
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, List, Mapping

from core.errors import DatasetParseError

GAP_HEADER = "round,lb_exact,lb_wo_frac,assess_frac"


@dataclass(frozen=True)
class GapPoint:
    round: int
    lb_exact: int
    lb_wo_frac: float
    assess_frac: float


def gap_fraction(value: float, lb_exact: float, nK: float) -> float:
    span = nK - lb_exact
    if span <= 0:
        return 0.0
    return (value - lb_exact) / span


def gap_points(rows: Iterable[Mapping[str, str]], nK: int) -> List[GapPoint]:
    points = []
    for row in rows:
        try:
            lb_exact = row.get("lb_exact", "")
            lb_wo = row.get("lb_wo", "")
            if not lb_exact or not lb_wo or int(lb_exact) < 0:
                continue
            exact = int(lb_exact)
            points.append(GapPoint(
                round=int(row["round"]),
                lb_exact=exact,
                lb_wo_frac=gap_fraction(int(lb_wo), exact, nK),
                assess_frac=gap_fraction(int(row["assess_round"]), exact, nK),
            ))
        except (KeyError, ValueError) as e:
            raise DatasetParseError(f"CSV 行格式错误: {dict(row)}") from e
    return points


def gap_csv(run_csv: str, nK: int) -> str:
    """输入逐轮 CSV 文本，输出间隙比例 CSV 文本"""
    reader = csv.DictReader(io.StringIO(run_csv))
    lines = [GAP_HEADER]
    for p in gap_points(reader, nK):
        lines.append(f"{p.round},{p.lb_exact},{p.lb_wo_frac:.6f},{p.assess_frac:.6f}")
    return "\n".join(lines) + "\n"
