# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Configuration Manager
# ═══════════════════════════════════════════════════════════════
"""
配置管理器 - 统一管理项目配置
支持 YAML 配置文件、环境变量、数据集路径、参考数据
"""

import os
import json
import yaml
from pathlib import Path
from typing import Any, Dict, Optional, List
from dotenv import load_dotenv

from utils.logger import get_logger

load_dotenv()

logger = get_logger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class ConfigManager:
    """
    配置管理器 - 单例模式

    配置优先级（从高到低）:
    1. 环境变量 (boosting.rounds -> BOOSTING_ROUNDS)
    2. config/project.yaml
    3. 默认值
    """

    _instance = None
    _config_data = None

    def __new__(cls, *args, **kwargs):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self, config_file: Optional[str] = None):
        if ConfigManager._config_data is None:
            path = Path(config_file) if config_file else PROJECT_ROOT / "config" / "project.yaml"
            ConfigManager._config_data = self._load_config(path)

    @classmethod
    def reset(cls) -> None:
        """丢弃已加载的配置（测试中切换配置文件时使用）"""
        cls._instance = None
        cls._config_data = None

    def _load_config(self, config_path: Path) -> Dict[str, Any]:
        if not config_path.exists():
            logger.warning(f"配置文件不存在: {config_path}，使用默认配置")
            return self._get_default_config()
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                return yaml.safe_load(f) or {}
        except Exception as e:
            logger.warning(f"加载配置文件失败: {e}，使用默认配置")
            return self._get_default_config()

    def _get_default_config(self) -> Dict[str, Any]:
        return {
            "project": {"name": "Exact Stump Boosting", "version": "1.0.0"},
            "datasets": {},
            "boosting": {"rounds": 100, "depth": 3, "strategy": "adaptive", "variant": "none", "seed": 0},
            "quickboost": {"batches": 16, "init_mass": 0.25},
            "lower_bounds": {"tolerance": 1e-12, "node_budget": 10_000_000, "exact_max_examples": 2000},
            "logging": {"level": "INFO", "file": False, "dir": "reports"},
            "reports": {"output_dir": "reports"},
            "test_data": {"reference": {"path": "test-data/reference_results.json"}},
        }

    def get(self, key: str, default: Any = None) -> Any:
        env_key = key.upper().replace('.', '_')
        env_value = os.getenv(env_key)
        if env_value is not None:
            return self._convert_value(env_value)

        keys = key.split('.')
        value = self._config_data
        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def _convert_value(self, value: str) -> Any:
        if value.lower() in ['true', 'yes']:
            return True
        elif value.lower() in ['false', 'no']:
            return False
        elif value.isdigit():
            return int(value)
        try:
            return float(value)
        except ValueError:
            return value

    def resolve_path(self, path: str) -> Path:
        """相对路径以项目根目录为基准"""
        p = Path(path).expanduser()
        return p if p.is_absolute() else PROJECT_ROOT / p

    # ═══════════════════════════════════════════════════════════════
    # DATASET METHODS
    # ═══════════════════════════════════════════════════════════════

    def get_available_datasets(self) -> List[str]:
        """获取所有已配置的数据集名称"""
        return list((self.get("datasets", {}) or {}).keys())

    def get_dataset_path(self, name: str, split: str = "train") -> Optional[Path]:
        """
        获取数据集文件路径

        Args:
            name: 数据集名称 (a6a/w4a...)
            split: train 或 test
        """
        path = self.get(f"datasets.{name}.{split}", "")
        return self.resolve_path(path) if path else None

    def get_dataset_dim(self, name: str) -> Optional[int]:
        """获取数据集声明的特征维度"""
        dim = self.get(f"datasets.{name}.dim")
        return int(dim) if dim else None

    # ═══════════════════════════════════════════════════════════════
    # ALGORITHM CONFIG
    # ═══════════════════════════════════════════════════════════════

    def get_boosting_config(self) -> Dict[str, Any]:
        """获取提升训练默认参数"""
        return {
            "rounds": int(self.get("boosting.rounds", 100)),
            "depth": int(self.get("boosting.depth", 3)),
            "strategy": str(self.get("boosting.strategy", "adaptive")),
            "variant": str(self.get("boosting.variant", "none")),
            "seed": int(self.get("boosting.seed", 0)),
        }

    def get_quickboost_config(self) -> Dict[str, Any]:
        """获取 Quick Boost 参数"""
        return {
            "batches": int(self.get("quickboost.batches", 16)),
            "init_mass": float(self.get("quickboost.init_mass", 0.25)),
        }

    def get_lower_bound_config(self) -> Dict[str, Any]:
        """获取下界计算参数"""
        return {
            "tolerance": float(self.get("lower_bounds.tolerance", 1e-12)),
            "node_budget": int(self.get("lower_bounds.node_budget", 10_000_000)),
            "exact_max_examples": int(self.get("lower_bounds.exact_max_examples", 2000)),
        }

    def get_logging_config(self) -> Dict[str, Any]:
        """获取日志配置"""
        return {
            "level": str(self.get("logging.level", "INFO")),
            "file": bool(self.get("logging.file", False)),
            "dir": self.resolve_path(self.get("logging.dir", "reports")),
        }

    def get_output_dir(self) -> Path:
        """获取报告输出目录"""
        return self.resolve_path(self.get("reports.output_dir", "reports"))

    # ═══════════════════════════════════════════════════════════════
    # TEST DATA METHODS
    # ═══════════════════════════════════════════════════════════════

    def get_test_data_path(self, name: str) -> Optional[Path]:
        """
        获取测试数据文件路径

        Args:
            name: 数据类型名称 (reference/toy...)
        """
        path = self.get(f"test_data.{name}.path", "")
        return self.resolve_path(path) if path else None

    def load_test_data(self, name: str) -> Any:
        """
        加载 JSON 测试数据

        Args:
            name: 数据类型名称
        """
        file_path = self.get_test_data_path(name)
        if file_path is None:
            return None
        if not file_path.exists():
            logger.warning(f"测试数据文件不存在: {file_path}")
            return None

        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except Exception as e:
            logger.warning(f"加载测试数据失败: {e}")
            return None
