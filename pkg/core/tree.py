# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Decision Tree
# ═══════════════════════════════════════════════════════════════
"""
深度受限的二叉决策树，逐节点调用决策桩搜索

约定: 内部节点的 left 子树接收 stump 预测为 +1 的样本，right 接收 -1。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from core.assessor import Stump
from core.dataset import Dataset, ExampleView, split_view
from core.errors import ArgumentError, ModelFormatError
from core.stump_search import QuickBoostParams, SearchResult, Strategy, search_stump
from core.weights import WeightVector
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TreeNode:
    """叶子 (label) 或内部节点 (stump, left, right)"""
    label: Optional[int] = None
    stump: Optional[Stump] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    def __post_init__(self):
        if self.is_leaf:
            if self.label not in (1, -1):
                raise ArgumentError(f"叶子标签必须为 ±1: {self.label}")
        elif self.left is None or self.right is None or self.label is not None:
            raise ArgumentError("内部节点需要 stump、left、right 且没有 label")

    @classmethod
    def leaf(cls, label: int) -> "TreeNode":
        return cls(label=int(label))

    @classmethod
    def split(cls, stump: Stump, left: "TreeNode", right: "TreeNode") -> "TreeNode":
        return cls(stump=stump, left=left, right=right)

    @property
    def is_leaf(self) -> bool:
        return self.stump is None

    @property
    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth, self.right.depth)

    def stumps(self) -> Iterator[Stump]:
        """先序遍历所有决策桩"""
        if not self.is_leaf:
            yield self.stump
            yield from self.left.stumps()
            yield from self.right.stumps()

    def predict_example(self, x: Mapping[int, float]) -> int:
        """单个样本预测，x 为 {特征下标: 取值}，缺失为 0"""
        node = self
        while not node.is_leaf:
            value = float(x.get(node.stump.k, 0.0))
            node = node.left if node.stump.predict_value(value) > 0 else node.right
        return node.label

    def predict(self, d: Dataset, members: Optional[np.ndarray] = None) -> np.ndarray:
        """
        批量预测，返回与 members 对齐的 ±1 数组

        测试集维度可以小于训练集，超出的特征视为全 0。
        """
        if members is None:
            members = np.arange(d.n, dtype=np.int64)
        out = np.empty(len(members), dtype=np.int8)
        self._predict_into(d, np.asarray(members, dtype=np.int64), np.arange(len(members)), out)
        return out

    def _predict_into(self, d: Dataset, members: np.ndarray, slots: np.ndarray, out: np.ndarray) -> None:
        if self.is_leaf:
            out[slots] = self.label
            return
        if len(members) == 0:
            return
        values = d.feature_values(self.stump.k, members, strict=False)
        go_left = self.stump.predict_values(values) > 0
        self.left._predict_into(d, members[go_left], slots[go_left], out)
        self.right._predict_into(d, members[~go_left], slots[~go_left], out)

    # ─────────────────────────────────────────────────────────────
    # text encoding
    # ─────────────────────────────────────────────────────────────

    def encode(self) -> str:
        """先序编码: 内部节点 `k tau p`，叶子 `leaf:±1`"""
        tokens: List[str] = []
        self._encode_into(tokens)
        return " ".join(tokens)

    def _encode_into(self, tokens: List[str]) -> None:
        if self.is_leaf:
            tokens.append(f"leaf:{self.label:+d}")
            return
        s = self.stump
        tokens.extend([str(s.k), repr(float(s.tau)), f"{s.p:+d}"])
        self.left._encode_into(tokens)
        self.right._encode_into(tokens)

    @classmethod
    def decode(cls, text: str) -> "TreeNode":
        tokens = text.split()
        node, used = _decode_tokens(tokens, 0)
        if used != len(tokens):
            raise ModelFormatError(f"树编码末尾有多余内容: {tokens[used:]}")
        return node


def _decode_tokens(tokens: Sequence[str], i: int) -> Tuple[TreeNode, int]:
    if i >= len(tokens):
        raise ModelFormatError("树编码意外结束")
    head = tokens[i]
    if head.startswith("leaf:"):
        try:
            return TreeNode.leaf(int(head[5:])), i + 1
        except (ValueError, ArgumentError) as e:
            raise ModelFormatError(f"非法叶子: {head}") from e
    if i + 3 > len(tokens):
        raise ModelFormatError("内部节点缺少字段")
    try:
        stump = Stump(p=int(tokens[i + 2]), k=int(head), tau=float(tokens[i + 1]))
    except (ValueError, ArgumentError) as e:
        raise ModelFormatError(f"非法内部节点: {tokens[i:i + 3]}") from e
    left, i = _decode_tokens(tokens, i + 3)
    right, i = _decode_tokens(tokens, i)
    return TreeNode.split(stump, left, right), i


# ═══════════════════════════════════════════════════════════════
# TRAINING
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class NodeRecord:
    """一次节点搜索的记录，供下界计算复现"""
    view: ExampleView
    weights: WeightVector
    features: Optional[Tuple[int, ...]]
    result: SearchResult
    level: int


def weighted_majority(view: ExampleView, wv: WeightVector, default: int) -> int:
    """视图上加权多数标签；平局或无权重时返回 default"""
    if len(view) == 0:
        return default
    w = wv.w[view.members]
    y = view.base.labels[view.members]
    pos = float(w[y > 0].sum())
    neg = float(w[y < 0].sum())
    if pos > neg:
        return 1
    if neg > pos:
        return -1
    return default


def train_tree(view: ExampleView, wv: WeightVector, depth: int,
               strategy: "str | Strategy" = Strategy.ADAPTIVE,
               feature_subset: Optional[Sequence[int]] = None,
               qb: Optional[QuickBoostParams] = None,
               trace: Optional[List[NodeRecord]] = None) -> Tuple[TreeNode, int]:
    """
    训练一棵深度不超过 depth 的树

    Args:
        view: 训练样本
        wv: 本轮权重（全局，节点内部自动限制并重新归一化）
        depth: 深度上限，>= 1
        strategy: 节点搜索策略
        feature_subset: 可选的特征子集
        qb: Quick Boost 参数
        trace: 若给出，每次节点搜索追加一条 NodeRecord

    Returns:
        (树, 所有节点的评估总数)
    """
    if depth < 1:
        raise ArgumentError(f"深度必须 >= 1: {depth}")
    if len(view) == 0:
        raise ArgumentError("训练视图为空")
    strategy = Strategy.parse(strategy)
    features = tuple(sorted(set(int(k) for k in feature_subset))) if feature_subset is not None else None
    return _build(view, wv, depth, strategy, features, qb, trace, level=0)


def _build(view: ExampleView, wv: WeightVector, depth: int, strategy: Strategy,
           features: Optional[Tuple[int, ...]], qb: Optional[QuickBoostParams],
           trace: Optional[List[NodeRecord]], level: int) -> Tuple[TreeNode, int]:
    labels = view.base.labels[view.members]
    if np.all(labels == labels[0]):
        return TreeNode.leaf(int(labels[0])), 0

    result = search_stump(strategy, view, wv, features, qb)
    if trace is not None:
        trace.append(NodeRecord(view, wv, features, result, level))
    logger.debug(f"节点 level={level} n={len(view)}: {result.stump} E={result.error:.6f}")

    total = result.assessments
    children = []
    for child, side in zip(split_view(view, result.stump), (1, -1)):
        has_weight = len(child) > 0 and float(wv.w[child.members].sum()) > 0
        if depth == 1 or not has_weight:
            children.append(TreeNode.leaf(weighted_majority(child, wv, side)))
            continue
        node, used = _build(child, wv, depth - 1, strategy, features, qb, trace, level + 1)
        children.append(node)
        total += used
    return TreeNode.split(result.stump, children[0], children[1]), total
