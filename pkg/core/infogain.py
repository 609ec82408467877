# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Information Gain Bounds
# ═══════════════════════════════════════════════════════════════
"""
部分评估下条件熵（信息增益目标）的区间界，全部以 2 为底

对每个叶子，已见权重给出下界 Z_u·ε_u；上界再加上未见权重的熵上限 w·lg|Y|
与 KL 项的上界 Σ_y (Z_u^y + w^y)·lg((Z_u + w)/Z_u^y)，并与平凡上界
(Z_u + w)·lg|Y| 取较小者。
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence, Tuple

import numpy as np
from scipy.special import kl_div, rel_entr

from core.errors import ArgumentError, InfiniteDivergenceError

_LN2 = math.log(2)


def lg(x: float) -> float:
    return math.log2(x)


def _xlg(a: float, b: float) -> float:
    """a·lg(a/b)，约定 0·lg(0/b) = 0"""
    return float(rel_entr(a, b)) / _LN2


def weighted_entropy(per_label: Mapping[Hashable, float]) -> float:
    """Z·H = -Σ_y Z^y lg(Z^y / Z)"""
    total = sum(per_label.values())
    if total <= 0:
        return 0.0
    z = np.fromiter(per_label.values(), dtype=np.float64)
    return float(-np.sum(rel_entr(z, total))) / _LN2


@dataclass(frozen=True)
class LeafTally:
    """叶子上已见样本的按标签权重 Z_u^y；labels 为完整标签集 Y"""
    per_label: Mapping[Hashable, float]
    labels: Tuple[Hashable, ...] = field(default=(1, -1))

    def __post_init__(self):
        if any(z < 0 for z in self.per_label.values()):
            raise ArgumentError("叶子权重必须非负")
        if not set(self.per_label) <= set(self.labels):
            raise ArgumentError("叶子包含标签集之外的标签")

    @property
    def total(self) -> float:
        return float(sum(self.per_label.values()))

    def get(self, y: Hashable) -> float:
        return float(self.per_label.get(y, 0.0))


@dataclass(frozen=True)
class UnseenTally:
    """所有叶子合计的未见权重 w^y（标签已知，所属叶子未知）"""
    per_label: Mapping[Hashable, float]

    def __post_init__(self):
        if any(z < 0 for z in self.per_label.values()):
            raise ArgumentError("未见权重必须非负")

    @property
    def total(self) -> float:
        return float(sum(self.per_label.values()))

    def get(self, y: Hashable) -> float:
        return float(self.per_label.get(y, 0.0))


def kl_bernoulli(p: float, q: float) -> float:
    """
    KL(B(p) || B(q))，以 2 为底

    Raises:
        ArgumentError: p 或 q 不在 [0, 1]
        InfiniteDivergenceError: q ∈ {0, 1} 且 p ≠ q
    """
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ArgumentError(f"概率必须在 [0, 1] 内: p={p}, q={q}")
    if q in (0.0, 1.0) and p != q:
        raise InfiniteDivergenceError(f"KL(B({p}) || B({q})) = inf")
    value = float(kl_div(p, q) + kl_div(1.0 - p, 1.0 - q)) / _LN2
    return max(value, 0.0)


def leaf_entropy_interval(seen: LeafTally, unseen: UnseenTally) -> Tuple[float, float]:
    """单个叶子 Z_ρ·ε_ρ 的 (下界, 上界)"""
    lower = weighted_entropy(seen.per_label)
    w = unseen.total
    if w == 0:
        return lower, lower

    n_labels = len(seen.labels)
    trivial = (seen.total + w) * lg(n_labels)
    bound = lower + w * lg(n_labels)
    for y in seen.labels:
        zy, wy = seen.get(y), unseen.get(y)
        if zy == 0:
            if wy > 0:
                bound = math.inf
                break
            continue
        bound += (zy + wy) * lg((seen.total + w) / zy)
    return lower, max(lower, min(bound, trivial))


def conditional_entropy_interval(leaves: Sequence[LeafTally], unseen: UnseenTally) -> Tuple[float, float]:
    """Z_n·ε_n 的 (下界, 上界)，逐叶子求和"""
    lower = upper = 0.0
    for leaf in leaves:
        lo, hi = leaf_entropy_interval(leaf, unseen)
        lower += lo
        upper += hi
    return lower, upper


def check_lemma_kl(a: float, b: float, alpha: float, beta: float) -> float:
    """
    (a+b)·lg((a+b)/(α+β)) = a·lg(a/α) + b·lg(b/β) - (a+b)·KL(B(a/(a+b)) || B(α/(α+β)))
    的残差绝对值
    """
    if a < 0 or b < 0 or alpha <= 0 or beta <= 0 or a + b <= 0:
        raise ArgumentError(f"需要 a, b >= 0, a + b > 0, alpha, beta > 0: {(a, b, alpha, beta)}")
    s = a + b
    lhs = s * lg(s / (alpha + beta))
    rhs = _xlg(a, alpha) + _xlg(b, beta) - s * kl_bernoulli(a / s, alpha / (alpha + beta))
    return abs(lhs - rhs)


def check_kl_upper_bound(zu_y: float, zrho_y: float, zu: float, zrho: float, w: float) -> float:
    """
    lg((Z_u + w)/Z_u^y) - KL(B(Z_u^y/Z_ρ^y) || B(Z_u/Z_ρ))，应 >= 0

    Raises:
        ArgumentError: 前置条件不成立
    """
    if not (0 < zu_y <= zu <= zrho and zu_y <= zrho_y <= zrho and zrho - zu <= w):
        raise ArgumentError(f"KL 上界前置条件不成立: {(zu_y, zrho_y, zu, zrho, w)}")
    if zrho_y - zu_y > zrho - zu:
        raise ArgumentError("标签 y 的未见权重超过叶子的未见权重")
    p = min(zu_y / zrho_y, 1.0)
    q = min(zu / zrho, 1.0)
    return lg((zu + w) / zu_y) - kl_bernoulli(p, q)
