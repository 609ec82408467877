# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Stump Search
# ═══════════════════════════════════════════════════════════════
"""
节点分裂的三种策略，均返回贪心最优的决策桩

- adaptive:   自适应剪枝，维护 a = 上界最小的特征、b = 下界最小的竞争者
- quickboost: 先完整评估最有希望的特征作为现任，其余特征分批评估并剪枝
- exhaustive: 全部特征评估全部样本

比较键为 (E_n, k)。完整评估时的 ε 从头重算，三种策略得到的 E_n 逐位相同，
因此返回的决策桩也相同。
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from core.assessor import FeatureAssessor, NodeFrame, Stump
from core.dataset import ExampleView
from core.errors import ArgumentError, ContractViolationError
from core.weights import WeightVector
from utils.logger import get_logger

logger = get_logger(__name__)

# 部分评估下的浮点误差容限；小于该差距的比较留给完整评估后的精确比较
TOL = 1e-12


class Strategy(str, Enum):
    ADAPTIVE = "adaptive"
    QUICKBOOST = "quickboost"
    EXHAUSTIVE = "exhaustive"

    @classmethod
    def parse(cls, name: "str | Strategy") -> "Strategy":
        """解析策略名，接受 CLI 简写 ap / qb / classic"""
        if isinstance(name, Strategy):
            return name
        key = str(name).strip().lower()
        aliases = {"ap": cls.ADAPTIVE, "qb": cls.QUICKBOOST, "classic": cls.EXHAUSTIVE}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ArgumentError(f"未知策略: {name}") from None

    @property
    def short(self) -> str:
        return {"adaptive": "ap", "quickboost": "qb", "exhaustive": "classic"}[self.value]


@dataclass(frozen=True)
class QuickBoostParams:
    batches: int = 16
    init_mass: float = 0.25

    def __post_init__(self):
        if self.batches < 1:
            raise ArgumentError(f"batches 必须 >= 1: {self.batches}")
        if not 0 < self.init_mass < 1:
            raise ArgumentError(f"init_mass 必须在 (0, 1) 内: {self.init_mass}")


@dataclass(frozen=True)
class SearchResult:
    """
    一次节点搜索的结果

    Attributes:
        stump: 返回的决策桩
        error: 节点上的精确加权错误率 E_n
        assessments: 本次搜索的评估总数
        per_feature_m: 每个特征的已评估样本数
        final_lb: 搜索结束时每个特征的下界（用于剪枝安全性检查）
    """
    stump: Stump
    error: float
    assessments: int
    per_feature_m: Dict[int, int] = field(default_factory=dict)
    final_lb: Dict[int, float] = field(default_factory=dict)


# ═══════════════════════════════════════════════════════════════
# HELPERS
# ═══════════════════════════════════════════════════════════════

def _feature_list(frame: NodeFrame, features: Optional[Sequence[int]]) -> List[int]:
    if features is None:
        return list(range(1, frame.dataset.K + 1))
    ks = sorted(set(int(k) for k in features))
    if not ks:
        raise ArgumentError("特征子集为空")
    if ks[0] < 1 or ks[-1] > frame.dataset.K:
        raise ArgumentError(f"特征子集越界 (K={frame.dataset.K})")
    return ks


def _key(f: FeatureAssessor) -> Tuple[float, int]:
    return f.best_wrong_weight() / f.Zn, f.k


def _grow(f: FeatureAssessor, gap: float) -> None:
    """把已评估权重延长 gap，至少多评估一个样本"""
    frame = f.frame
    target = float(frame.Z[f.m_seen]) + max(gap, 0.0)
    stop = max(frame.weights.prefix_index(target), f.m_seen + 1)
    f.assess_to(stop)


def _dominated(b: FeatureAssessor, a: FeatureAssessor) -> bool:
    """b 是否已被证明不可能优于 a"""
    if a.is_complete and b.is_complete:
        return _key(b) > _key(a)
    return b.lb() > a.ub() + TOL


def _finish(frame: NodeFrame, winner: FeatureAssessor,
            assessors: Sequence[FeatureAssessor], strategy: str) -> SearchResult:
    if not winner.is_complete:
        raise ContractViolationError(f"特征 {winner.k} 未完整评估就被返回")
    error = min(max(winner.lb(), 0.0), 1.0)
    result = SearchResult(
        stump=winner.best_stump(),
        error=error,
        assessments=sum(f.assess_count for f in assessors),
        per_feature_m={f.k: f.m_seen for f in assessors},
        final_lb={f.k: f.lb() for f in assessors},
    )
    logger.debug(
        f"{strategy}: n={frame.n} K={len(assessors)} -> k={result.stump.k} "
        f"E={result.error:.6f} assessments={result.assessments}"
    )
    return result


# ═══════════════════════════════════════════════════════════════
# STRATEGIES
# ═══════════════════════════════════════════════════════════════

def adaptive_pruning_stump(view: ExampleView, wv: WeightVector,
                           features: Optional[Sequence[int]] = None) -> SearchResult:
    """
    自适应剪枝搜索

    先让所有特征评估覆盖一半节点权重的前缀；之后反复比较 a（上界最小）与
    b（其余特征中下界最小），按区间重叠量 gap 扩展两者的评估前缀，直到其余
    特征全部被剪枝。最后完整评估 a。

    Raises:
        ArgumentError: 视图为空或特征子集非法
        ContractViolationError: 迭代次数超过 2·n·K（不应发生）
    """
    frame = NodeFrame(view, wv)
    ks = _feature_list(frame, features)
    assessors = {k: frame.assessor(k) for k in ks}
    n = frame.n

    m0 = max(frame.weights.prefix_index(0.5 * frame.Zn), 1)
    for f in assessors.values():
        f.assess(0, m0)

    a = min(assessors.values(), key=lambda f: (f.ub(), f.k))
    heap = [(f.lb(), f.k) for f in assessors.values() if f.k != a.k]
    heapq.heapify(heap)

    guard = 2 * n * len(ks)
    iterations = 0
    while heap:
        stored_lb, k = heap[0]
        b = assessors[k]
        if stored_lb != b.lb():
            heapq.heapreplace(heap, (b.lb(), k))
            continue
        if _dominated(b, a):
            heapq.heappop(heap)
            continue

        iterations += 1
        if iterations > guard:
            raise ContractViolationError(f"自适应搜索超过迭代上限 {guard}")

        if not a.is_complete:
            _grow(a, a.ub() - b.lb())
        if not b.is_complete and not _dominated(b, a):
            _grow(b, a.ub() - b.lb())

        if (b.ub(), b.k) < (a.ub(), a.k):
            heapq.heapreplace(heap, (a.lb(), a.k))
            a = b

    a.assess_to(n)
    logger.debug(f"自适应搜索: {iterations} 次迭代")
    return _finish(frame, a, list(assessors.values()), "adaptive")


def quick_boost_stump(view: ExampleView, wv: WeightVector,
                      batches: int = 16, init_mass: float = 0.25,
                      features: Optional[Sequence[int]] = None) -> SearchResult:
    """
    Quick Boost 搜索

    所有特征先评估覆盖 init_mass 权重的前缀，按 (E_m, k) 排序；第一个特征完整
    评估作为现任，其余特征把剩余权重均分为 batches 批逐批评估，一旦下界超过
    现任的 E_n 即剪枝。

    Raises:
        ArgumentError: 参数非法或视图为空
    """
    params = QuickBoostParams(batches, init_mass)
    frame = NodeFrame(view, wv)
    ks = _feature_list(frame, features)
    assessors = {k: frame.assessor(k) for k in ks}
    n = frame.n

    m0 = max(frame.weights.prefix_index(params.init_mass * frame.Zn), 1)
    for f in assessors.values():
        f.assess(0, m0)

    ranked = sorted(assessors.values(), key=lambda f: (f.error_so_far(), f.k))
    incumbent = ranked[0].assess_to(n)
    Zm0 = float(frame.Z[m0])
    step = (frame.Zn - Zm0) / params.batches

    for f in ranked[1:]:
        for j in range(1, params.batches + 1):
            if f.lb() > incumbent.lb() + TOL or f.is_complete:
                break
            stop = n if j == params.batches else frame.weights.prefix_index(Zm0 + j * step)
            f.assess_to(stop)
        if f.is_complete and _key(f) < _key(incumbent):
            incumbent = f

    return _finish(frame, incumbent, list(assessors.values()), "quickboost")


def exhaustive_stump(view: ExampleView, wv: WeightVector,
                     features: Optional[Sequence[int]] = None) -> SearchResult:
    """全部特征评估全部样本，返回 (E_n, k) 最小者"""
    frame = NodeFrame(view, wv)
    ks = _feature_list(frame, features)
    assessors = [frame.assessor(k).assess(0, frame.n) for k in ks]
    winner = min(assessors, key=_key)
    return _finish(frame, winner, assessors, "exhaustive")


def search_stump(strategy: "str | Strategy", view: ExampleView, wv: WeightVector,
                 features: Optional[Sequence[int]] = None,
                 qb: Optional[QuickBoostParams] = None) -> SearchResult:
    """按策略名分派"""
    strategy = Strategy.parse(strategy)
    if strategy is Strategy.ADAPTIVE:
        return adaptive_pruning_stump(view, wv, features)
    if strategy is Strategy.QUICKBOOST:
        qb = qb or QuickBoostParams()
        return quick_boost_stump(view, wv, qb.batches, qb.init_mass, features)
    return exhaustive_stump(view, wv, features)
