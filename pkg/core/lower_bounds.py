# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Assessment Lower Bounds
# ═══════════════════════════════════════════════════════════════
"""
一次节点搜索所需评估次数的两个下界

- 权重顺序下界: 按权重降序评估时，证明每个非最优特征不优于 E* 所需的最短前缀
- 精确下界: 允许任意评估顺序，每个特征的最小覆盖样本集（整数规划，分支定界求解）

两者都满足 n <= exact <= weight_order <= 自适应搜索的评估数。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.assessor import FeatureAssessor, NodeFrame, assess_all
from core.dataset import ExampleView
from core.errors import ArgumentError, BoundTimeoutError, OracleMismatchError
from core.weights import WeightVector
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TOLERANCE = 1e-12
DEFAULT_NODE_BUDGET = 10_000_000
# 分支定界下界计算中放宽的量，只会让界更弱，不会剪掉最优解
_BOUND_SLACK = 1e-12


def _oracle(frame: NodeFrame, features: Optional[Sequence[int]]) -> Tuple[List[FeatureAssessor], float, int]:
    ks = list(range(1, frame.dataset.K + 1)) if features is None else sorted(set(features))
    assessors = assess_all(frame, ks)
    best = min(assessors, key=lambda f: (f.lb(), f.k))
    return assessors, best.lb(), best.k


@dataclass(frozen=True)
class PruneInstance:
    """
    节点上的剪枝问题

    Attributes:
        E_star: 返回特征的精确错误率
        k_star: 返回的特征
        n: 节点样本数
        weights: 按位置（权重降序）排列的归一化权重
        errors: 每个特征的精确错误率
        features: 特征 -> 误分类矩阵 (决策桩数, n)
    """
    E_star: float
    k_star: int
    n: int
    weights: np.ndarray
    errors: Dict[int, float]
    features: Dict[int, np.ndarray]

    @classmethod
    def from_node(cls, view: ExampleView, wv: WeightVector,
                  features: Optional[Sequence[int]] = None) -> "PruneInstance":
        frame = NodeFrame(view, wv)
        assessors, E_star, k_star = _oracle(frame, features)
        return cls(
            E_star=E_star,
            k_star=k_star,
            n=frame.n,
            weights=frame.sorted_w / frame.Zn,
            errors={f.k: f.lb() for f in assessors},
            features={f.k: f.misclassification_matrix() for f in assessors},
        )


# ═══════════════════════════════════════════════════════════════
# WEIGHT-ORDER BOUND
# ═══════════════════════════════════════════════════════════════

def weight_order_prefix(miss: np.ndarray, weights: np.ndarray, E_star: float,
                        tol: float = DEFAULT_TOLERANCE) -> int:
    """
    最短前缀长度 m，使每个决策桩在前 m 个样本上的误分类权重都 >= E* - tol

    Args:
        miss: (决策桩数, n) 布尔矩阵，列按权重降序
        weights: 按位置排列的权重
    """
    miss = np.asarray(miss, dtype=bool)
    weights = np.asarray(weights, dtype=np.float64)
    if miss.ndim != 2 or miss.shape[1] != len(weights):
        raise ArgumentError("误分类矩阵与权重长度不一致")
    target = E_star - tol
    if target <= 0:
        return 0
    lower = np.min(np.cumsum(miss * weights, axis=1), axis=0)
    reached = np.flatnonzero(lower >= target)
    if len(reached) == 0:
        raise OracleMismatchError(f"前缀无法达到 E*={E_star}")
    return int(reached[0]) + 1


def weight_order_lb(view: ExampleView, wv: WeightVector,
                    features: Optional[Sequence[int]] = None,
                    tol: float = DEFAULT_TOLERANCE) -> Tuple[int, Dict[int, int]]:
    """
    权重顺序下界

    与 E* 并列（差距不超过 tol）的特征需要 m = n；其余特征在误分类矩阵上
    沿权重顺序一次累加，取所有决策桩都达到 E* - tol 的最短前缀。

    Returns:
        (n + Σ_{k != k*} m_k, 每个特征的 m_k)
    """
    frame = NodeFrame(view, wv)
    assessors, E_star, k_star = _oracle(frame, features)
    n = frame.n
    per_feature: Dict[int, int] = {}

    for f in assessors:
        if f.k == k_star or abs(f.lb() - E_star) <= tol:
            per_feature[f.k] = n
            continue
        per_feature[f.k] = weight_order_prefix(f.misclassification_matrix(), frame.sorted_w, E_star, tol)

    total = n + sum(m for k, m in per_feature.items() if k != k_star)
    return total, per_feature


# ═══════════════════════════════════════════════════════════════
# EXACT BOUND
# ═══════════════════════════════════════════════════════════════

class _CoverProblem:
    """每一行（决策桩）都需被覆盖到 target 的最小样本集"""

    def __init__(self, miss: np.ndarray, weights: np.ndarray, target: float):
        rows = np.asarray(miss, dtype=bool) * np.asarray(weights, dtype=np.float64)
        useful = np.flatnonzero(rows.any(axis=0))
        rows = np.unique(rows[:, useful], axis=0)
        self.rows = rows
        self.target = target
        self.R, self.N = rows.shape
        # 每行非零项左移压缩后的累计和，以及列 i 之前的非零项个数
        nonzero = rows > 0
        self.before = np.concatenate([np.zeros((self.R, 1), dtype=np.int64),
                                      np.cumsum(nonzero, axis=1)], axis=1)
        compact = -np.sort(-rows, axis=1)
        self.cum = np.concatenate([np.zeros((self.R, 1)), np.cumsum(compact, axis=1)], axis=1)
        self._row_idx = np.arange(self.R)

    def need(self, i: int, residual: np.ndarray) -> float:
        """从第 i 列起，各行单独覆盖剩余量所需的最少列数中的最大者"""
        open_rows = residual > 0
        if not open_rows.any():
            return 0
        s = self.before[:, i]
        base = self.cum[self._row_idx, s]
        goal = base + residual - _BOUND_SLACK
        if np.any(self.cum[open_rows, -1] < goal[open_rows]):
            return math.inf
        counts = np.maximum((self.cum < goal[:, None]).sum(axis=1) - s, 0)
        return float(np.max(np.where(open_rows, counts, 0)))

    def greedy(self) -> int:
        residual = np.full(self.R, self.target)
        used = np.zeros(self.N, dtype=bool)
        count = 0
        while np.any(residual > 0):
            gain = np.minimum(np.clip(residual, 0, None)[:, None], self.rows).sum(axis=0)
            gain[used] = -1.0
            j = int(np.argmax(gain))
            if gain[j] <= 0:
                return self.N + 1
            used[j] = True
            residual = residual - self.rows[:, j]
            count += 1
        return count


def min_cover_size(miss: np.ndarray, weights: np.ndarray, target: float,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """
    最小样本集大小，使每一行的误分类权重之和 >= target

    深度优先分支定界: 变量按权重降序，先尝试"选入"分支；节点下界为各行单独
    覆盖其剩余量所需的最少样本数的最大值。

    Raises:
        OracleMismatchError: 某一行的总误分类权重不足 target
        BoundTimeoutError: 搜索节点数超过 node_budget，partial 为仍然成立的下界
    """
    if target <= 0:
        return 0
    miss = np.asarray(miss, dtype=bool)
    weights = np.asarray(weights, dtype=np.float64)
    if miss.ndim != 2 or miss.shape[1] != len(weights):
        raise ArgumentError("误分类矩阵与权重长度不一致")
    totals = (miss * weights).sum(axis=1)
    if np.any(totals < target):
        raise OracleMismatchError(f"存在无法覆盖到 {target} 的决策桩 (最小总权重 {totals.min()})")

    problem = _CoverProblem(miss, weights, target)
    best = problem.greedy()
    try:
        best = min(best, weight_order_prefix(miss, weights, target, tol=0.0))
    except OracleMismatchError:
        pass

    stack: List[Tuple[int, int, np.ndarray]] = [(0, 0, np.full(problem.R, target))]
    nodes = 0
    while stack:
        nodes += 1
        if nodes > node_budget:
            open_bounds = [c + problem.need(i, res) for i, c, res in stack]
            partial = int(min([best] + open_bounds))
            raise BoundTimeoutError(f"分支定界超过节点预算 {node_budget}", partial=partial)
        i, count, residual = stack.pop()
        if not np.any(residual > 0):
            best = min(best, count)
            continue
        if i >= problem.N or count + problem.need(i, residual) >= best:
            continue
        stack.append((i + 1, count, residual))
        stack.append((i + 1, count + 1, residual - problem.rows[:, i]))

    logger.debug(f"最小覆盖: {problem.R} 行 {problem.N} 列, {nodes} 个节点 -> {best}")
    return best


def min_prune_set(instance: PruneInstance, k: int, tol: float = DEFAULT_TOLERANCE,
                  node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """证明特征 k 不优于 E*（或并列）所需的最少样本数"""
    if k == instance.k_star:
        raise ArgumentError(f"特征 {k} 是返回的特征")
    if k not in instance.features:
        raise ArgumentError(f"特征 {k} 不在实例中")
    return min_cover_size(instance.features[k], instance.weights, instance.E_star - tol, node_budget)


def exact_lb(view: ExampleView, wv: WeightVector,
             features: Optional[Sequence[int]] = None,
             tol: float = DEFAULT_TOLERANCE,
             node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """
    精确下界 n + Σ_{k != k*} min_prune_set(k)，仅适合小规模节点

    Raises:
        BoundTimeoutError: 任一特征超出节点预算；partial 汇总所有特征的合法下界
    """
    instance = PruneInstance.from_node(view, wv, features)
    total = instance.n
    timed_out = False
    for k in sorted(instance.features):
        if k == instance.k_star:
            continue
        try:
            total += min_prune_set(instance, k, tol, node_budget)
        except BoundTimeoutError as e:
            logger.warning(f"特征 {k} 的最小覆盖超时，使用部分下界 {e.partial}")
            total += e.partial
            timed_out = True
    if timed_out:
        raise BoundTimeoutError("精确下界未完成", partial=total)
    return total
