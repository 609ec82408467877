# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Weight Vector
# ═══════════════════════════════════════════════════════════════
"""
提升权重 - 按权重降序维护样本顺序与前缀和 Z_m

权重相同的样本按样本编号升序排列，所有算法看到同一个样本序列，
结果逐位可复现。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from core.errors import ArgumentError, DegenerateWeightsError
from utils.logger import get_logger

logger = get_logger(__name__)


def merge_groups(first: np.ndarray, second: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, int]:
    """
    合并两个已按 (权重降序, 编号升序) 排好的样本组

    Args:
        first: 第一组样本编号
        second: 第二组样本编号
        weights: 按样本编号索引的权重

    Returns:
        (合并后的顺序, 比较次数)；比较次数不超过 len(first) + len(second)
    """
    a_ids = first.tolist()
    b_ids = second.tolist()
    a_w = weights[first].tolist()
    b_w = weights[second].tolist()
    out: List[int] = []
    i = j = 0
    comparisons = 0
    while i < len(a_ids) and j < len(b_ids):
        comparisons += 1
        if a_w[i] > b_w[j] or (a_w[i] == b_w[j] and a_ids[i] < b_ids[j]):
            out.append(a_ids[i])
            i += 1
        else:
            out.append(b_ids[j])
            j += 1
    out.extend(a_ids[i:])
    out.extend(b_ids[j:])
    return np.asarray(out, dtype=np.int64), comparisons


@dataclass(frozen=True, eq=False)
class WeightVector:
    """
    降序权重向量

    Attributes:
        order: 位置 -> 样本编号，权重非增
        w: 按样本编号索引的权重（不在 order 中的样本不参与）
        Z: 前缀和，Z[0] = 0，Z[m] 为前 m 个（最重）样本的权重和

    乘法更新之后、merge_reorder 之前 order 可以暂时失序，其余时刻都有序。
    """
    order: np.ndarray
    w: np.ndarray
    Z: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        w = np.asarray(self.w, dtype=np.float64)
        sorted_w = w[order]
        if not np.all(np.isfinite(sorted_w)) or np.any(sorted_w < 0):
            raise ArgumentError("权重必须是非负有限数")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "Z", np.concatenate([[0.0], np.cumsum(sorted_w)]))

    # ═══════════════════════════════════════════════════════════════
    # CONSTRUCTORS
    # ═══════════════════════════════════════════════════════════════

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        """均匀初始权重 1/n"""
        if n <= 0:
            raise ArgumentError("样本数必须为正")
        return cls(np.arange(n, dtype=np.int64), np.full(n, 1.0 / n))

    @classmethod
    def from_weights(cls, w: np.ndarray) -> "WeightVector":
        """任意权重 -> 完整排序（权重降序，编号升序）"""
        w = np.asarray(w, dtype=np.float64)
        ids = np.arange(len(w))
        return cls(np.lexsort((ids, -w)), w)

    # ═══════════════════════════════════════════════════════════════
    # QUERIES
    # ═══════════════════════════════════════════════════════════════

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def total(self) -> float:
        return float(self.Z[-1])

    @property
    def sorted_weights(self) -> np.ndarray:
        return self.w[self.order]

    def is_sorted(self) -> bool:
        """order 是否满足 (权重降序, 编号升序)"""
        if self.n < 2:
            return True
        sw = self.sorted_weights
        dw = np.diff(sw)
        ties = dw == 0
        return bool(np.all(dw <= 0) and np.all(np.diff(self.order)[ties] > 0))

    def prefix_index(self, target: float) -> int:
        """
        满足 Z_m >= target 的最小 m；target 超过 Z_n 时取 n
        """
        if target < 0:
            raise ArgumentError(f"目标权重不能为负: {target}")
        m = int(np.searchsorted(self.Z, target, side="left"))
        return min(m, self.n)

    # ═══════════════════════════════════════════════════════════════
    # TRANSFORMS
    # ═══════════════════════════════════════════════════════════════

    def normalize(self) -> "WeightVector":
        """
        所有权重除以总和，顺序不变

        Raises:
            DegenerateWeightsError: 总和为 0
        """
        total = self.total
        if total <= 0:
            raise DegenerateWeightsError("权重总和为 0，无法归一化")
        return WeightVector(self.order, self.w / total)

    def restrict(self, members: np.ndarray) -> "WeightVector":
        """
        限制到样本子集并在子集上重新归一化（树节点的局部权重）

        子集顺序是原顺序的子序列，因此仍然有序。
        """
        mask = np.zeros(len(self.w), dtype=bool)
        mask[members] = True
        sub_order = self.order[mask[self.order]]
        if len(sub_order) != len(members):
            raise ArgumentError("子集包含不在权重向量中的样本")
        sub_w = np.zeros_like(self.w)
        sub_w[sub_order] = self.w[sub_order]
        return WeightVector(sub_order, sub_w).normalize()

    def prefix(self, q: float) -> np.ndarray:
        """覆盖权重比例 q 的最短前缀中的样本编号（权重裁剪）"""
        m = self.prefix_index(q * self.total)
        return self.order[:max(m, 1)]

    def merge_reorder(self, correct: np.ndarray) -> "WeightVector":
        """
        乘法更新后重建顺序: 分类正确与错误两组各自保持原相对顺序，
        一次归并即可，O(n) 次比较

        Args:
            correct: 按样本编号索引的布尔数组
        """
        flags = np.asarray(correct, dtype=bool)[self.order]
        merged, comparisons = merge_groups(self.order[flags], self.order[~flags], self.w)
        logger.debug(f"归并重排: n={self.n} 比较 {comparisons} 次")
        return WeightVector(merged, self.w)

    def adaboost_update(self, predictions: np.ndarray, labels: np.ndarray, alpha: float) -> "WeightVector":
        """
        AdaBoost 权重更新 w_i <- w_i * exp(-alpha * y_i * h(x_i))，归一化后归并重排

        Args:
            predictions: 按样本编号索引的 ±1 预测
            labels: 按样本编号索引的 ±1 标签
            alpha: 本轮系数（截断由调用方负责）
        """
        predictions = np.asarray(predictions)
        labels = np.asarray(labels)
        if len(predictions) != len(self.w) or len(labels) != len(self.w):
            raise ArgumentError("预测与标签长度必须等于样本数")
        if not np.isfinite(alpha):
            raise ArgumentError(f"alpha 必须为有限数: {alpha}")
        margin = labels.astype(np.float64) * predictions.astype(np.float64)
        scaled = WeightVector(self.order, self.w * np.exp(-alpha * margin)).normalize()
        return scaled.merge_reorder(margin > 0)
