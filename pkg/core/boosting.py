# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - AdaBoost Driver
# ═══════════════════════════════════════════════════════════════
"""
离散 AdaBoost 主循环（LazyBoost / 权重裁剪变体）及集成模型
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Mapping, Optional, Tuple

import numpy as np

from core.dataset import Dataset, ExampleView
from core.errors import ArgumentError, BoundTimeoutError, ModelFormatError
from core.lower_bounds import DEFAULT_NODE_BUDGET, DEFAULT_TOLERANCE, exact_lb, weight_order_lb
from core.stump_search import QuickBoostParams, Strategy
from core.tree import NodeRecord, TreeNode, train_tree
from core.weights import WeightVector
from utils.logger import get_logger

logger = get_logger(__name__)

MODEL_HEADER = "# exact-stump-boosting ensemble v1"

# 下界超时时写入的标记值
TIMEOUT_SENTINEL = -1


# ═══════════════════════════════════════════════════════════════
# ENSEMBLE
# ═══════════════════════════════════════════════════════════════

@dataclass
class Ensemble:
    """H_T(x) = Σ alpha_t · h_t(x)，sign(0) = +1"""
    rounds: List[Tuple[float, TreeNode]] = field(default_factory=list)

    def __post_init__(self):
        for alpha, _ in self.rounds:
            if not math.isfinite(alpha):
                raise ArgumentError(f"alpha 必须为有限数: {alpha}")

    def __len__(self) -> int:
        return len(self.rounds)

    def add(self, alpha: float, tree: TreeNode) -> None:
        if not math.isfinite(alpha):
            raise ArgumentError(f"alpha 必须为有限数: {alpha}")
        self.rounds.append((float(alpha), tree))

    def predict(self, x: Mapping[int, float]) -> int:
        score = sum(alpha * tree.predict_example(x) for alpha, tree in self.rounds)
        return 1 if score >= 0 else -1

    def decision_function(self, d: Dataset) -> np.ndarray:
        margin = np.zeros(d.n)
        for alpha, tree in self.rounds:
            margin += alpha * tree.predict(d)
        return margin

    def predict_dataset(self, d: Dataset) -> np.ndarray:
        return np.where(self.decision_function(d) >= 0, 1, -1).astype(np.int8)

    def error_rate(self, d: Dataset) -> float:
        """未加权的误分类比例"""
        if d.n == 0:
            return 0.0
        return float(np.mean(self.predict_dataset(d) != d.labels))

    def dumps(self) -> str:
        """每轮一行: `alpha 树编码`，格式见 docs/model_format.md"""
        lines = [MODEL_HEADER]
        lines.extend(f"{alpha!r} {tree.encode()}" for alpha, tree in self.rounds)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Ensemble":
        ensemble = cls()
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rest = line.partition(" ")
            try:
                alpha = float(head)
            except ValueError:
                raise ModelFormatError(f"第 {line_no} 行: 非法 alpha {head!r}") from None
            if not math.isfinite(alpha):
                raise ModelFormatError(f"第 {line_no} 行: alpha 非有限数")
            ensemble.add(alpha, TreeNode.decode(rest))
        return ensemble


# ═══════════════════════════════════════════════════════════════
# ROUND CONFIGURATION
# ═══════════════════════════════════════════════════════════════

class LowerBoundMode(str, Enum):
    NONE = "none"
    WO = "wo"
    EXACT = "exact"


@dataclass(frozen=True)
class Variant:
    """每轮的预处理: none / lazy(q) 随机特征子集 / trim(q) 权重前缀"""
    kind: str = "none"
    q: float = 1.0

    def __post_init__(self):
        if self.kind not in ("none", "lazy", "trim"):
            raise ArgumentError(f"未知变体: {self.kind}")
        if not 0 < self.q <= 1:
            raise ArgumentError(f"变体比例必须在 (0, 1] 内: {self.q}")

    @classmethod
    def parse(cls, text: str) -> "Variant":
        """解析 `none`、`lazy=Q`、`trim=Q`"""
        text = text.strip().lower()
        if text == "none":
            return cls()
        kind, sep, value = text.partition("=")
        if not sep:
            raise ArgumentError(f"变体格式应为 none | lazy=Q | trim=Q: {text}")
        try:
            q = float(value)
        except ValueError:
            raise ArgumentError(f"非法变体比例: {value}") from None
        return cls(kind, q)

    def __str__(self) -> str:
        return "none" if self.kind == "none" else f"{self.kind}={self.q:g}"


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    assess_round: int
    assess_cum: int
    train_err: float
    test_err: Optional[float]
    wall_ms: float
    lb_wo: Optional[int] = None
    lb_exact: Optional[int] = None
    alpha: float = 0.0
    weighted_error: float = 0.0


def round_rng(seed: int, round_index: int) -> np.random.Generator:
    """每轮独立的随机流，由根种子和轮次派生"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(round_index,)))


def lazy_features(K: int, q: float, rng: np.random.Generator) -> List[int]:
    """均匀无放回抽取 ⌈qK⌉ 个特征，升序返回"""
    count = min(K, max(1, math.ceil(q * K)))
    return sorted(int(k) + 1 for k in rng.choice(K, size=count, replace=False))


def compute_alpha(weighted_error: float, n: int) -> Tuple[float, float]:
    """alpha = ½ ln((1-ε)/ε)，ε 截断到 [1/(2n), 1 - 1/(2n)]；返回 (alpha, 截断后的 ε)"""
    floor = 1.0 / (2 * n)
    eps = min(max(weighted_error, floor), 1.0 - floor)
    return 0.5 * math.log((1.0 - eps) / eps), eps


def trace_lower_bounds(trace: List[NodeRecord], mode: LowerBoundMode,
                       tol: float = DEFAULT_TOLERANCE,
                       node_budget: int = DEFAULT_NODE_BUDGET) -> Tuple[Optional[int], Optional[int]]:
    """
    按节点记录汇总下界；精确下界超时时记为 TIMEOUT_SENTINEL

    Returns:
        (lb_wo, lb_exact)
    """
    if mode is LowerBoundMode.NONE:
        return None, None
    lb_wo = sum(weight_order_lb(r.view, r.weights, r.features, tol)[0] for r in trace)
    if mode is not LowerBoundMode.EXACT:
        return lb_wo, None
    lb_exact = 0
    for r in trace:
        try:
            lb_exact += exact_lb(r.view, r.weights, r.features, tol, node_budget)
        except BoundTimeoutError as e:
            logger.warning(f"精确下界超时 (部分下界 {e.partial})")
            return lb_wo, TIMEOUT_SENTINEL
    return lb_wo, lb_exact


# ═══════════════════════════════════════════════════════════════
# DRIVER
# ═══════════════════════════════════════════════════════════════

def adaboost(train: Dataset, test: Optional[Dataset] = None, T: int = 100, depth: int = 1,
             strategy: "str | Strategy" = Strategy.ADAPTIVE,
             variant: Variant = Variant(), seed: int = 0,
             qb: Optional[QuickBoostParams] = None,
             lower_bounds: "str | LowerBoundMode" = LowerBoundMode.NONE,
             tol: float = DEFAULT_TOLERANCE,
             node_budget: int = DEFAULT_NODE_BUDGET,
             on_round: Optional[Callable[[RoundMetrics], None]] = None) -> Tuple[Ensemble, List[RoundMetrics]]:
    """
    训练 T 轮 AdaBoost

    每轮: 变体预处理 -> 训练树 -> 在全部样本上计算加权错误并得到 alpha ->
    权重更新与归并重排 -> 记录 RoundMetrics。训练/测试集的 margin 逐轮累加。

    Raises:
        ArgumentError: T < 1、depth < 1 或参数非法
    """
    if T < 1:
        raise ArgumentError(f"轮数必须 >= 1: {T}")
    if depth < 1:
        raise ArgumentError(f"深度必须 >= 1: {depth}")
    strategy = Strategy.parse(strategy)
    mode = LowerBoundMode(lower_bounds)

    wv = WeightVector.uniform(train.n)
    full_view = ExampleView.full(train)
    ensemble = Ensemble()
    history: List[RoundMetrics] = []
    train_margin = np.zeros(train.n)
    test_margin = np.zeros(test.n) if test is not None else None
    cumulative = 0

    for t in range(1, T + 1):
        started = time.perf_counter()

        view = full_view
        features = None
        if variant.kind == "trim" and variant.q < 1:
            view = ExampleView(train, np.sort(wv.prefix(variant.q)))
        elif variant.kind == "lazy" and variant.q < 1:
            features = lazy_features(train.K, variant.q, round_rng(seed, t))

        trace: Optional[List[NodeRecord]] = [] if mode is not LowerBoundMode.NONE else None
        tree, assessments = train_tree(view, wv, depth, strategy, features, qb, trace)

        predictions = tree.predict(train)
        weighted_error = float(wv.w[predictions != train.labels].sum() / wv.total)
        alpha, _ = compute_alpha(weighted_error, train.n)
        wv = wv.adaboost_update(predictions, train.labels, alpha)
        ensemble.add(alpha, tree)

        train_margin += alpha * predictions
        train_err = float(np.mean(np.where(train_margin >= 0, 1, -1) != train.labels))
        test_err = None
        if test is not None:
            test_margin += alpha * tree.predict(test)
            test_err = float(np.mean(np.where(test_margin >= 0, 1, -1) != test.labels))
        wall_ms = (time.perf_counter() - started) * 1000.0

        lb_wo, lb_exact = trace_lower_bounds(trace or [], mode, tol, node_budget)
        cumulative += assessments
        metrics = RoundMetrics(
            round=t,
            assess_round=assessments,
            assess_cum=cumulative,
            train_err=train_err,
            test_err=test_err,
            wall_ms=wall_ms,
            lb_wo=lb_wo,
            lb_exact=lb_exact,
            alpha=alpha,
            weighted_error=weighted_error,
        )
        history.append(metrics)
        logger.debug(
            f"第 {t} 轮: assessments={assessments} eps={weighted_error:.6f} "
            f"alpha={alpha:.6f} train_err={train_err:.4f}"
        )
        if on_round is not None:
            on_round(metrics)

    return ensemble, history
