# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Feature Assessor
# ═══════════════════════════════════════════════════════════════
"""
单特征增量评估器

对一个特征维护按阈值划分的有序区间表: 区间边界恰为已评估样本的不同取值，
同一区间内任意阈值在已评估样本上的表现相同。每次 assess 一批按权重顺序
连续的样本，更新两种极性下每个区间的误分类权重 ε，并给出

    L = min_j ε^j / Z_n
    U = L + (Z_n - Z_m) / Z_n

所有搜索策略共用这一实现，评估计数口径一致。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.dataset import Dataset, ExampleView
from core.errors import ArgumentError, ContractViolationError
from core.weights import WeightVector

_EMPTY = np.zeros(0, dtype=np.float64)


# ═══════════════════════════════════════════════════════════════
# DOMAIN TYPES
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Stump:
    """决策桩 h(x) = p * sign(x[k] - tau)，约定 sign(0) = +1"""
    p: int
    k: int
    tau: float

    def __post_init__(self):
        if self.p not in (1, -1):
            raise ArgumentError(f"极性必须为 ±1: {self.p}")
        if self.k < 1:
            raise ArgumentError(f"特征下标必须从 1 开始: {self.k}")

    def predict_value(self, x: float) -> int:
        return self.p if x - self.tau >= 0 else -self.p

    def predict_values(self, values: np.ndarray) -> np.ndarray:
        return np.where(values - self.tau >= 0, self.p, -self.p).astype(np.int8)


@dataclass(frozen=True)
class ThresholdInterval:
    """阈值区间 (lo, hi]，及两种极性下的误分类权重"""
    lo: float
    hi: float
    wrong_weight_pos: float
    wrong_weight_neg: float


class NodeFrame:
    """
    树节点上的样本帧: 节点局部归一化权重按降序排列后的标签、权重与前缀和

    每个特征的列数据按位置（权重顺序）重排后缓存，供评估器读取。
    """

    def __init__(self, view: ExampleView, wv: WeightVector):
        if len(view) == 0:
            raise ArgumentError("节点视图为空")
        self.view = view
        self.dataset: Dataset = view.base
        self.weights = wv.restrict(view.members)
        self.order = self.weights.order
        self.n = self.weights.n
        self.sorted_w = self.weights.sorted_weights
        self.labels = self.dataset.labels[self.order]
        self.Z = self.weights.Z
        self.Zn = float(self.Z[-1])
        self._columns: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}

    def column(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """第 k 列在本节点上的 (位置, 取值)，位置升序"""
        cached = self._columns.get(k)
        if cached is not None:
            return cached
        cached = self.dataset.rows_of_column(k, self.order)
        self._columns[k] = cached
        return cached

    def assessor(self, k: int) -> "FeatureAssessor":
        return FeatureAssessor(k, self)


# ═══════════════════════════════════════════════════════════════
# ASSESSOR
# ═══════════════════════════════════════════════════════════════

class FeatureAssessor:
    """
    特征 k 的全部决策桩的增量评估器

    Attributes:
        k: 特征下标（从 1 开始）
        m_seen: 已评估的样本数（权重顺序上的前缀长度）
        assess_count: 累计评估次数（每个 (特征, 样本) 计一次）
    """

    def __init__(self, k: int, frame: NodeFrame):
        self.k = k
        self.frame = frame
        self._positions, self._col_values = frame.column(k)
        self.m_seen = 0
        self.assess_count = 0
        # 每个不同取值上 +1/-1 标签的已评估权重
        self._values = _EMPTY
        self._pos_w = _EMPTY
        self._neg_w = _EMPTY
        # 区间 i 介于 values[i-1] 与 values[i] 之间，共 len(values)+1 个
        self._eps_pos = np.zeros(1)
        self._eps_neg = np.zeros(1)

    # ─────────────────────────────────────────────────────────────
    # properties
    # ─────────────────────────────────────────────────────────────

    @property
    def Zn(self) -> float:
        return self.frame.Zn

    @property
    def Zm_seen(self) -> float:
        return float(self.frame.Z[self.m_seen])

    @property
    def is_complete(self) -> bool:
        return self.m_seen == self.frame.n

    @property
    def values(self) -> np.ndarray:
        """已评估样本的不同取值（区间边界），升序"""
        return self._values

    @property
    def intervals(self) -> List[ThresholdInterval]:
        """当前的有序区间表，覆盖 (-inf, +inf)"""
        bounds = np.concatenate([[-np.inf], self._values, [np.inf]])
        return [
            ThresholdInterval(float(bounds[i]), float(bounds[i + 1]),
                              float(self._eps_pos[i]), float(self._eps_neg[i]))
            for i in range(len(self._eps_pos))
        ]

    # ─────────────────────────────────────────────────────────────
    # assessment
    # ─────────────────────────────────────────────────────────────

    def assess(self, start: int, stop: int) -> "FeatureAssessor":
        """
        评估位置 [start, stop) 上的一批样本（权重顺序上紧接已评估前缀）

        Raises:
            ContractViolationError: 批次与已评估部分重叠或不连续
        """
        if start != self.m_seen or stop < start or stop > self.frame.n:
            raise ContractViolationError(
                f"特征 {self.k}: 批次 [{start}, {stop}) 与已评估前缀 {self.m_seen} 不衔接"
            )
        if stop == start:
            return self

        if stop == self.frame.n and start > 0:
            # 完整评估时从头重算，使结果与分批方式无关
            self._values, self._pos_w, self._neg_w = self._tally(0, stop)
        else:
            self._merge(*self._tally(start, stop))
        self._rescore()

        self.assess_count += stop - start
        self.m_seen = stop
        return self

    def assess_to(self, stop: int) -> "FeatureAssessor":
        """把已评估前缀延长到 stop（超过 n 时截断）"""
        stop = min(max(stop, self.m_seen), self.frame.n)
        return self.assess(self.m_seen, stop)

    def _batch(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
        """批次内各样本的 (取值, 位置)；未存储的取值为 0"""
        lo, hi = np.searchsorted(self._positions, [start, stop])
        nz_pos = self._positions[lo:hi]
        nz_val = self._col_values[lo:hi]
        zero_mask = np.ones(stop - start, dtype=bool)
        zero_mask[nz_pos - start] = False
        zero_pos = np.arange(start, stop)[zero_mask]
        values = np.concatenate([nz_val, np.zeros(len(zero_pos))])
        positions = np.concatenate([nz_pos, zero_pos])
        return values, positions

    def _tally(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        values, positions = self._batch(start, stop)
        w = self.frame.sorted_w[positions]
        positive = self.frame.labels[positions] > 0
        uniq, inverse = np.unique(values, return_inverse=True)
        pos_w = np.bincount(inverse, weights=np.where(positive, w, 0.0), minlength=len(uniq))
        neg_w = np.bincount(inverse, weights=np.where(positive, 0.0, w), minlength=len(uniq))
        return uniq, pos_w, neg_w

    def _merge(self, uniq: np.ndarray, pos_w: np.ndarray, neg_w: np.ndarray) -> None:
        """在新取值处切分已有区间并累加权重"""
        if len(self._values):
            at = np.searchsorted(self._values, uniq)
            clipped = np.minimum(at, len(self._values) - 1)
            fresh = ~((at < len(self._values)) & (self._values[clipped] == uniq))
            new_vals = uniq[fresh]
            slots = np.searchsorted(self._values, new_vals)
            values = np.insert(self._values, slots, new_vals)
            acc_pos = np.insert(self._pos_w, slots, 0.0)
            acc_neg = np.insert(self._neg_w, slots, 0.0)
        else:
            values = uniq
            acc_pos = np.zeros(len(uniq))
            acc_neg = np.zeros(len(uniq))
        where = np.searchsorted(values, uniq)
        acc_pos[where] += pos_w
        acc_neg[where] += neg_w
        self._values, self._pos_w, self._neg_w = values, acc_pos, acc_neg

    def _rescore(self) -> None:
        pos_below = np.concatenate([[0.0], np.cumsum(self._pos_w)])
        neg_below = np.concatenate([[0.0], np.cumsum(self._neg_w)])
        pos_total, neg_total = pos_below[-1], neg_below[-1]
        # p=+1: 阈值以下判 -1，以上判 +1
        self._eps_pos = pos_below + (neg_total - neg_below)
        self._eps_neg = neg_below + (pos_total - pos_below)

    # ─────────────────────────────────────────────────────────────
    # queries
    # ─────────────────────────────────────────────────────────────

    def best_wrong_weight(self) -> float:
        """min_j ε^j"""
        return float(min(self._eps_pos.min(), self._eps_neg.min()))

    def lb(self) -> float:
        return self.best_wrong_weight() / self.Zn

    def ub(self) -> float:
        return self.lb() + (self.Zn - self.Zm_seen) / self.Zn

    def error_so_far(self) -> float:
        """E_m = min_j ε^j / Z_m"""
        if self.m_seen == 0 or self.Zm_seen <= 0:
            raise ContractViolationError(f"特征 {self.k} 尚未评估任何样本")
        return self.best_wrong_weight() / self.Zm_seen

    def _best_index(self) -> Tuple[int, int]:
        # 行优先展开: 区间升序，同区间内 p=+1 在前
        flat = np.column_stack([self._eps_pos, self._eps_neg]).ravel()
        j = int(np.argmin(flat))
        return j // 2, (1 if j % 2 == 0 else -1)

    def threshold(self, i: int) -> float:
        """区间 i 的代表阈值: 中点；两端区间取 min-1 / max+1"""
        v = self._values
        if i == 0:
            return float(v[0] - 1.0)
        if i == len(v):
            return float(v[-1] + 1.0)
        return float((v[i - 1] + v[i]) / 2.0)

    def best_stump(self) -> Stump:
        """
        ε 最小的决策桩；并列时取较小阈值，再取 p=+1

        Raises:
            ContractViolationError: 尚未评估任何样本
        """
        if self.m_seen == 0:
            raise ContractViolationError(f"特征 {self.k} 尚未评估任何样本")
        i, p = self._best_index()
        return Stump(p=p, k=self.k, tau=self.threshold(i))

    # ─────────────────────────────────────────────────────────────
    # full-column structure (lower bounds)
    # ─────────────────────────────────────────────────────────────

    def misclassification_matrix(self) -> np.ndarray:
        """
        完整评估后，每个决策桩 (区间, 极性) 在每个位置上是否误分类

        Returns:
            形状 (2 * 区间数, n) 的布尔矩阵，行序与 best_stump 的并列规则一致
        """
        if not self.is_complete:
            raise ContractViolationError(f"特征 {self.k} 未完整评估")
        values, positions = self._batch(0, self.frame.n)
        ranks = np.empty(self.frame.n, dtype=np.int64)
        ranks[positions] = np.searchsorted(self._values, values)
        positive = self.frame.labels > 0
        n_intervals = len(self._values) + 1
        below = ranks[None, :] < np.arange(n_intervals)[:, None]
        miss_pos = below == positive[None, :]
        out = np.empty((2 * n_intervals, self.frame.n), dtype=bool)
        out[0::2] = miss_pos
        out[1::2] = ~miss_pos
        return out


def assess_all(frame: NodeFrame, features: Optional[List[int]] = None) -> List[FeatureAssessor]:
    """对给定特征（默认全部）完整评估，返回评估器列表"""
    ks = features if features is not None else list(range(1, frame.dataset.K + 1))
    return [frame.assessor(k).assess(0, frame.n) for k in ks]
