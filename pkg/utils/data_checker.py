# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Dataset Checker
# ═══════════════════════════════════════════════════════════════
"""
数据集检查器 - 运行实验或验收测试前检查数据文件是否就绪
"""

from typing import Dict, Tuple

from utils.config import ConfigManager
from utils.logger import get_logger

logger = get_logger(__name__)


class DatasetChecker:
    """
    数据集检查器

    使用方式:
        checker = DatasetChecker()

        # 检查单个数据集
        is_ok, msg = checker.check_dataset("a6a")

        # 检查所有数据集
        results = checker.check_all_datasets()
    """

    def __init__(self):
        self.config = ConfigManager()

    def check_dataset(self, name: str) -> Tuple[bool, str]:
        """
        检查数据集的训练和测试文件是否存在且非空

        Args:
            name: 数据集名称 (a6a/w4a)

        Returns:
            Tuple[bool, str]: (是否可用, 消息)
        """
        train = self.config.get_dataset_path(name, "train")
        if train is None:
            return False, f"❌ {name}: 未配置训练文件"

        missing = []
        for split in ("train", "test"):
            path = self.config.get_dataset_path(name, split)
            if path is None:
                continue
            if not path.exists() or path.stat().st_size == 0:
                missing.append(str(path))

        if missing:
            return False, f"❌ {name}: 缺少文件 {', '.join(missing)}"
        return True, f"✅ {name}: {train}"

    def check_all_datasets(self) -> Dict[str, Tuple[bool, str]]:
        """
        检查所有配置的数据集

        Returns:
            Dict[str, Tuple[bool, str]]: 数据集名 -> (是否可用, 消息)
        """
        return {name: self.check_dataset(name) for name in self.config.get_available_datasets()}

    def get_status_report(self) -> str:
        """
        获取数据集状态报告（格式化输出）

        Returns:
            str: 格式化的状态报告
        """
        results = self.check_all_datasets()

        if not results:
            return "⚠️ 未配置任何数据集"

        lines = ["", "═" * 50, "数据集检查", "═" * 50]
        all_ok = True
        for _, (is_ok, msg) in results.items():
            lines.append(msg)
            all_ok = all_ok and is_ok
        lines.append("═" * 50)
        lines.append("✅ 所有数据集就绪" if all_ok else "⚠️ 部分数据集缺失，相关验收测试将跳过")
        lines.append("")
        return "\n".join(lines)
