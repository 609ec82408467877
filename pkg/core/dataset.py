# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Dataset
# ═══════════════════════════════════════════════════════════════
"""
数据集 - svmlight/LIBSVM 文本解析为按列存储的稀疏矩阵 (scipy.sparse.csc_matrix)

约定:
- 特征下标对外从 1 开始（与文件格式一致），矩阵内部第 k 个特征为第 k-1 列
- 样本编号为文件中的行序号，从 0 开始
- 缺失项视为 0；显式写出的 0 不单独存储
"""

from __future__ import annotations

import gzip
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from core.errors import ArgumentError, DatasetParseError
from utils.logger import get_logger

if TYPE_CHECKING:
    from core.assessor import Stump

logger = get_logger(__name__)

_EMPTY_IDX = np.zeros(0, dtype=np.int64)
_EMPTY_VAL = np.zeros(0, dtype=np.float64)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    列存储稀疏数据集（解析后不再修改，可并发读取）

    Attributes:
        labels: 每个样本的标签，取值 +1 / -1
        X: n × K 的 csc_matrix，索引有序、无重复、不存显式 0
    """
    labels: np.ndarray
    X: sparse.csc_matrix

    def __post_init__(self):
        if self.X.shape[0] != len(self.labels):
            raise ArgumentError(f"标签数 {len(self.labels)} 与矩阵行数 {self.X.shape[0]} 不一致")
        self.X.sum_duplicates()
        self.X.eliminate_zeros()
        _readonly(self.labels)

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def K(self) -> int:
        return int(self.X.shape[1])

    @property
    def nnz(self) -> int:
        return int(self.X.nnz)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.X.shape == other.X.shape
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.X.indptr, other.X.indptr)
            and np.array_equal(self.X.indices, other.X.indices)
            and np.array_equal(self.X.data, other.X.data)
        )

    __hash__ = None  # type: ignore[assignment]

    def _check_feature(self, k: int) -> None:
        if not 1 <= k <= self.K:
            raise ArgumentError(f"特征下标越界: {k} (K={self.K})")

    def column(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        第 k 列的 (样本编号, 取值)，编号升序

        Raises:
            ArgumentError: k 不在 [1, K]
        """
        self._check_feature(k)
        col = self.X[:, k - 1]
        return col.indices.astype(np.int64), col.data

    def column_or_empty(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """与 column 相同，但 k > K 时视为全零列（测试集维度可能更小）"""
        if k > self.K:
            return _EMPTY_IDX, _EMPTY_VAL
        return self.column(k)

    def rows_of_column(self, k: int, rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        第 k 列按 rows 的顺序取子列，返回 (在 rows 中的位置, 取值)，位置升序

        只包含非零项。
        """
        self._check_feature(k)
        rows = np.asarray(rows, dtype=np.int64)
        if len(rows) == 0:
            return _EMPTY_IDX, _EMPTY_VAL
        sub = self.X[rows, k - 1]
        sub.sort_indices()
        return sub.indices.astype(np.int64), sub.data

    def feature_values(self, k: int, members: np.ndarray, *, strict: bool = True) -> np.ndarray:
        """
        第 k 个特征在 members 上的稠密取值（与 members 对齐，缺失为 0）
        """
        members = np.asarray(members, dtype=np.int64)
        if not strict and k > self.K:
            return np.zeros(len(members), dtype=np.float64)
        self._check_feature(k)
        if len(members) == 0:
            return np.zeros(0, dtype=np.float64)
        return np.asarray(self.X[members, k - 1].toarray(), dtype=np.float64).ravel()

    def summary(self) -> Dict[str, Union[int, float]]:
        """数据集概况"""
        positive = float(np.mean(self.labels > 0)) if self.n else 0.0
        return {"n": self.n, "K": self.K, "nnz": self.nnz, "positive_fraction": positive}


@dataclass(frozen=True, eq=False)
class ExampleView:
    """
    数据集的样本子集视图（树节点的样本划分）

    members 保持有序、无重复，均为 base 中的合法样本编号。
    """
    base: Dataset
    members: np.ndarray

    def __post_init__(self):
        members = np.asarray(self.members, dtype=np.int64)
        if len(members):
            if members.min() < 0 or members.max() >= self.base.n:
                raise ArgumentError("视图包含越界的样本编号")
            if len(np.unique(members)) != len(members):
                raise ArgumentError("视图包含重复样本")
        object.__setattr__(self, "members", _readonly(members))

    @classmethod
    def full(cls, base: Dataset) -> "ExampleView":
        """覆盖全部样本的视图"""
        return cls(base, np.arange(base.n, dtype=np.int64))

    def __len__(self) -> int:
        return len(self.members)


# ═══════════════════════════════════════════════════════════════
# PARSING
# ═══════════════════════════════════════════════════════════════

def _parse_feature(token: str, line_no: int) -> Tuple[int, float]:
    idx_str, sep, val_str = token.partition(":")
    if not sep:
        raise DatasetParseError(f"非法特征项: {token!r}", line_no)
    try:
        idx = int(idx_str)
        val = float(val_str)
    except ValueError:
        raise DatasetParseError(f"非法特征项: {token!r}", line_no) from None
    if idx <= 0:
        raise DatasetParseError(f"特征下标必须为正整数: {idx}", line_no)
    if not math.isfinite(val):
        raise DatasetParseError(f"特征取值非有限数: {token!r}", line_no)
    return idx, val


def parse_svmlight(lines: Iterable[str], declared_dim: Optional[int] = None) -> Dataset:
    """
    解析 svmlight 文本

    每个非空行为 `<label> <index>:<value> ...`，下标严格递增；
    `#` 之后为注释；`qid:` 项被忽略。标签 > 0 记为 +1，否则 -1。

    Args:
        lines: 文本行
        declared_dim: 声明的特征维度（K 取其与最大下标中的较大者）

    Raises:
        DatasetParseError: 格式错误（带行号）或输入为空
    """
    labels: List[int] = []
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []
    max_idx = 0

    for line_no, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        tokens = text.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise DatasetParseError(f"非法标签: {tokens[0]!r}", line_no) from None
        if math.isnan(label):
            raise DatasetParseError(f"非法标签: {tokens[0]!r}", line_no)

        row = len(labels)
        labels.append(1 if label > 0 else -1)
        prev = 0
        for token in tokens[1:]:
            if token.startswith("qid:"):
                continue
            idx, val = _parse_feature(token, line_no)
            if idx <= prev:
                raise DatasetParseError(f"特征下标未严格递增: {prev} -> {idx}", line_no)
            prev = idx
            if val != 0.0:
                rows.append(row)
                cols.append(idx)
                vals.append(val)
        max_idx = max(max_idx, prev)

    if not labels:
        raise DatasetParseError("empty input")

    n = len(labels)
    K = max(max_idx, int(declared_dim or 0))
    X = sparse.csc_matrix(
        (
            np.asarray(vals, dtype=np.float64),
            (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64) - 1),
        ),
        shape=(n, K),
    )
    return Dataset(labels=np.asarray(labels, dtype=np.int8), X=X)


def load_dataset(path: Union[str, Path], declared_dim: Optional[int] = None) -> Dataset:
    """
    从文件读取数据集，文件名以 .gz 结尾时按 gzip 解压

    Raises:
        OSError: 文件不可读
        DatasetParseError: 格式错误
    """
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as f:
        dataset = parse_svmlight(f, declared_dim)
    info = dataset.summary()
    logger.info(f"已读取数据集 {path.name}: n={info['n']} K={info['K']} nnz={info['nnz']}")
    return dataset


def dump_svmlight(d: Dataset) -> str:
    """
    序列化为 svmlight 文本（取值使用最短可逆表示，重新解析结果一致）

    K 大于最大非零下标时，在最后一行追加显式的 `K:0` 保留维度。
    """
    R = d.X.tocsr()
    R.sort_indices()
    max_idx = int(R.indices.max()) + 1 if R.nnz else 0

    lines = []
    for i in range(d.n):
        parts = ["+1" if d.labels[i] > 0 else "-1"]
        lo, hi = R.indptr[i], R.indptr[i + 1]
        for j, v in zip(R.indices[lo:hi], R.data[lo:hi]):
            parts.append(f"{int(j) + 1}:{float(v)!r}")
        if i == d.n - 1 and d.K > max_idx:
            parts.append(f"{d.K}:0")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


# ═══════════════════════════════════════════════════════════════
# VIEW OPERATIONS
# ═══════════════════════════════════════════════════════════════

def column_values(d: Dataset, k: int, view: ExampleView) -> List[Tuple[int, float]]:
    """
    第 k 列在视图成员上的显式非零项；未列出的成员取值为 0

    Raises:
        ArgumentError: k 越界
    """
    idx, val = d.column(k)
    keep = np.isin(idx, view.members)
    return [(int(i), float(v)) for i, v in zip(idx[keep], val[keep])]


def split_view(view: ExampleView, s: "Stump") -> Tuple[ExampleView, ExampleView]:
    """
    按决策桩划分视图: 第一个视图为 h(x)=+1 的成员，第二个为 h(x)=-1

    两个子视图都保持输入视图中的相对顺序。
    """
    values = view.base.feature_values(s.k, view.members)
    positive = s.predict_values(values) > 0
    return (
        ExampleView(view.base, view.members[positive]),
        ExampleView(view.base, view.members[~positive]),
    )
