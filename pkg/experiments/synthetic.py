# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Synthetic Data Generator
# ═══════════════════════════════════════════════════════════════
"""
合成数据生成器 - 生成可复现的二分类 svmlight 数据集

职责：桌面规模的实验和测试数据
- 少数有信息特征 + 其余噪声特征
- 特征类型: binary (0/1 稀疏)、continuous (保留两位小数)、mixed
- 标签噪声按比例翻转
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from core.dataset import Dataset, parse_svmlight
from core.errors import ArgumentError
from utils.logger import get_logger

logger = get_logger(__name__)

FEATURE_KINDS = ("binary", "continuous", "mixed")


@dataclass(frozen=True)
class SyntheticSpec:
    """合成数据参数"""
    n: int = 500
    K: int = 20
    informative: Optional[int] = None
    kind: str = "mixed"
    noise: float = 0.05
    density: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.K < 1:
            raise ArgumentError(f"n 与 K 必须为正: n={self.n} K={self.K}")
        if self.kind not in FEATURE_KINDS:
            raise ArgumentError(f"未知特征类型: {self.kind}")
        if not 0 <= self.noise < 0.5:
            raise ArgumentError(f"标签噪声必须在 [0, 0.5) 内: {self.noise}")
        if not 0 < self.density <= 1:
            raise ArgumentError(f"非零密度必须在 (0, 1] 内: {self.density}")

    @property
    def n_informative(self) -> int:
        if self.informative is not None:
            return max(1, min(self.informative, self.K))
        return max(1, self.K // 5)


class SyntheticDataGenerator:
    """合成数据生成器"""

    def __init__(self, spec: SyntheticSpec):
        self.spec = spec
        self.rng = np.random.default_rng(spec.seed)

    def _column(self, j: int) -> np.ndarray:
        spec = self.spec
        present = self.rng.random(spec.n) < spec.density
        binary = spec.kind == "binary" or (spec.kind == "mixed" and j % 2 == 0)
        if binary:
            return present.astype(np.float64)
        values = np.round(self.rng.normal(0.0, 1.0, spec.n), 2)
        return np.where(present, values, 0.0)

    def generate_matrix(self) -> np.ndarray:
        """稠密特征矩阵 (n, K)"""
        return np.column_stack([self._column(j) for j in range(self.spec.K)])

    def generate_labels(self, X: np.ndarray) -> np.ndarray:
        """由有信息特征的线性组合决定标签，再按 noise 翻转"""
        spec = self.spec
        coef = self.rng.choice([-1.0, 1.0], size=spec.n_informative) * self.rng.uniform(0.5, 2.0, spec.n_informative)
        score = X[:, :spec.n_informative] @ coef
        labels = np.where(score > np.median(score), 1, -1)
        flip = self.rng.random(spec.n) < spec.noise
        return np.where(flip, -labels, labels)

    def generate_lines(self) -> List[str]:
        X = self.generate_matrix()
        y = self.generate_labels(X)
        lines = []
        for i in range(self.spec.n):
            parts = ["+1" if y[i] > 0 else "-1"]
            parts.extend(f"{j + 1}:{float(X[i, j])!r}" for j in np.flatnonzero(X[i]))
            lines.append(" ".join(parts))
        return lines

    def generate(self) -> Dataset:
        dataset = parse_svmlight(self.generate_lines(), declared_dim=self.spec.K)
        logger.debug(f"合成数据集: {dataset.summary()}")
        return dataset

    def generate_text(self) -> str:
        return "\n".join(self.generate_lines()) + "\n"


def synthetic_dataset(n: int = 500, K: int = 20, seed: int = 0, **kwargs) -> Dataset:
    """便捷函数"""
    return SyntheticDataGenerator(SyntheticSpec(n=n, K=K, seed=seed, **kwargs)).generate()


def xor_dataset(repeat: int = 5) -> Dataset:
    """
    两个二值特征的异或: 单层决策桩无法分开，深度 2 可以

    四个象限的样本数为 3:3:1:1，根节点的贪心最优分裂唯一且不退化。
    """
    lines = []
    for _ in range(repeat):
        lines.extend(["-1"] * 3 + ["+1 1:1"] * 3 + ["+1 2:1", "-1 1:1 2:1"])
    return parse_svmlight(lines, declared_dim=2)


def separable_dataset(n: int = 20) -> Dataset:
    """单特征线性可分: x < n/2 为 -1，其余为 +1"""
    lines = [f"{'+1' if i >= n // 2 else '-1'} 1:{float(i + 1)!r}" for i in range(n)]
    return parse_svmlight(lines, declared_dim=1)
