# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Core Module
# ═══════════════════════════════════════════════════════════════
"""
核心算法: 数据集、权重、单特征评估器、决策桩搜索、树、AdaBoost、下界
"""

from core.dataset import Dataset, ExampleView, parse_svmlight, load_dataset, dump_svmlight
from core.weights import WeightVector
from core.assessor import Stump, FeatureAssessor, NodeFrame
from core.stump_search import Strategy, SearchResult, search_stump
from core.tree import TreeNode, train_tree
from core.boosting import Ensemble, RoundMetrics, Variant, adaboost

__all__ = [
    'Dataset', 'ExampleView', 'parse_svmlight', 'load_dataset', 'dump_svmlight',
    'WeightVector',
    'Stump', 'FeatureAssessor', 'NodeFrame',
    'Strategy', 'SearchResult', 'search_stump',
    'TreeNode', 'train_tree',
    'Ensemble', 'RoundMetrics', 'Variant', 'adaboost',
]
