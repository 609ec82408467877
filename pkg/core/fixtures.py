# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Pytest Fixtures
# ═══════════════════════════════════════════════════════════════
"""
通用测试 fixtures - 提供测试所需的数据集、权重与配置
"""

import os
from pathlib import Path
from typing import Callable, List

import numpy as np
import pytest

from core.dataset import Dataset, ExampleView, load_dataset, parse_svmlight
from core.weights import WeightVector
from experiments.synthetic import synthetic_dataset
from utils.config import ConfigManager
from utils.logger import get_logger

logger = get_logger(__name__)
config = ConfigManager()


# ═══════════════════════════════════════════════════════════════
# TOY DATASETS
# ═══════════════════════════════════════════════════════════════

@pytest.fixture(scope="session")
def toy_text() -> str:
    """两样本 svmlight 文本: n=2, K=3"""
    return "+1 1:0.5 3:2.0\n-1 2:1.0\n"


@pytest.fixture(scope="session")
def toy_dataset(toy_text) -> Dataset:
    return parse_svmlight(toy_text.splitlines())


@pytest.fixture(scope="session")
def four_examples() -> Dataset:
    """
    单特征 4 样本: 取值 1..4，标签 +,-,+,-

    配合 four_weights 的权重 0.4, 0.3, 0.2, 0.1 使用。
    """
    return parse_svmlight(["+1 1:1", "-1 1:2", "+1 1:3", "-1 1:4"])


@pytest.fixture(scope="session")
def four_weights() -> WeightVector:
    return WeightVector.from_weights(np.array([0.4, 0.3, 0.2, 0.1]))


@pytest.fixture(scope="function")
def full_view() -> Callable[[Dataset], ExampleView]:
    """
    全样本视图工厂

    使用方式:
        def test_xxx(full_view, toy_dataset):
            view = full_view(toy_dataset)
    """
    return ExampleView.full


# ═══════════════════════════════════════════════════════════════
# RANDOM INSTANCES
# ═══════════════════════════════════════════════════════════════

def random_instance(rng: np.random.Generator, max_n: int = 50, max_k: int = 8,
                    levels: int = 5) -> Dataset:
    """小规模随机数据集: 取值为少量整数水平，便于制造并列与重复取值"""
    n = int(rng.integers(2, max_n + 1))
    K = int(rng.integers(1, max_k + 1))
    lines: List[str] = []
    for _ in range(n):
        label = "+1" if rng.random() < 0.5 else "-1"
        parts = [label]
        for k in range(1, K + 1):
            value = int(rng.integers(0, levels))
            if value:
                parts.append(f"{k}:{value}")
        lines.append(" ".join(parts))
    return parse_svmlight(lines, declared_dim=K)


def random_weights(rng: np.random.Generator, n: int) -> WeightVector:
    """随机正权重（含少量并列），已归一化"""
    raw = rng.choice([0.5, 1.0, 2.0, 3.0], size=n) * rng.choice([1.0, 1.0, rng.random() + 0.5], size=n)
    return WeightVector.from_weights(raw).normalize()


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    """固定种子的随机数生成器"""
    return np.random.default_rng(20240101)


@pytest.fixture(scope="session")
def synthetic_factory() -> Callable[..., Dataset]:
    """
    合成数据集工厂

    使用方式:
        def test_xxx(synthetic_factory):
            d = synthetic_factory(n=200, K=10, seed=3)
    """
    return synthetic_dataset


@pytest.fixture(scope="session")
def synthetic_small() -> Dataset:
    return synthetic_dataset(n=120, K=8, seed=7)


# ═══════════════════════════════════════════════════════════════
# CONFIGURATION & REFERENCE DATA
# ═══════════════════════════════════════════════════════════════

@pytest.fixture(scope="session")
def test_config() -> ConfigManager:
    """测试配置 fixture"""
    return config


@pytest.fixture(scope="session")
def reference_results():
    """已发表的参考数值（test-data/reference_results.json）"""
    return config.load_test_data("reference") or {}


@pytest.fixture(scope="session")
def toy_file() -> Path:
    path = config.get_test_data_path("toy")
    if path is None or not path.exists():
        pytest.skip("缺少 test-data/toy.svm")
    return path


# ═══════════════════════════════════════════════════════════════
# DATASET CHECK FIXTURES
# ═══════════════════════════════════════════════════════════════

@pytest.fixture(scope="session")
def dataset_checker():
    """数据集检查器 fixture"""
    from utils.data_checker import DatasetChecker
    return DatasetChecker()


@pytest.fixture(scope="session")
def require_dataset(dataset_checker):
    """
    需要真实数据集时使用，文件缺失则跳过

    使用方式:
        def test_xxx(require_dataset):
            train, test = require_dataset("a6a")
    """
    def _require(name: str):
        is_ok, msg = dataset_checker.check_dataset(name)
        if not is_ok:
            pytest.skip(msg)
        dim = config.get_dataset_dim(name)
        train = load_dataset(config.get_dataset_path(name, "train"), dim)
        test_path = config.get_dataset_path(name, "test")
        test = load_dataset(test_path, dim) if test_path is not None else None
        return train, test
    return _require


# ═══════════════════════════════════════════════════════════════
# ENVIRONMENT SETUP
# ═══════════════════════════════════════════════════════════════

@pytest.fixture(scope="session", autouse=True)
def setup_test_environment(dataset_checker):
    """设置测试环境 - session 级别"""
    for directory in [config.get_output_dir(), config.resolve_path("allure-results")]:
        os.makedirs(directory, exist_ok=True)

    logger.info("=" * 60)
    logger.info("🚀 测试环境初始化完成")
    logger.info(dataset_checker.get_status_report())
    logger.info("=" * 60)

    yield

    logger.info("=" * 60)
    logger.info("🏁 测试执行完成")
    logger.info("=" * 60)


# ═══════════════════════════════════════════════════════════════
# TEST LOGGING
# ═══════════════════════════════════════════════════════════════

@pytest.fixture(scope="function", autouse=True)
def log_test_info(request):
    """自动记录测试信息"""
    test_name = request.node.name
    test_file = request.node.fspath.basename if hasattr(request.node, 'fspath') else ""

    logger.info("")
    logger.info("=" * 60)
    logger.info(f"▶️  开始测试: {test_file}::{test_name}")
    logger.info("=" * 60)

    yield

    logger.info(f"⏹️  结束测试: {test_name}")
    logger.info("=" * 60)
