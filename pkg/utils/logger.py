# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Logger
# ═══════════════════════════════════════════════════════════════
"""
日志系统 - 提供统一的日志记录功能

控制台输出走 stderr（诊断流），CSV 等结果写 stdout 或文件，互不干扰。
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

_FORMAT = '%(asctime)s [%(levelname)8s] %(name)s: %(message)s'
_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# 由 configure_logging 设置，新建的 logger 也会沿用
_console_level = logging.INFO
_log_file: Optional[Path] = None


def get_logger(name: str = __name__) -> logging.Logger:
    """
    获取日志记录器

    Args:
        name: 日志记录器名称

    Returns:
        logging.Logger: 配置好的日志记录器
    """
    logger = logging.getLogger(name)

    # 避免重复添加处理器
    if logger.handlers:
        return logger

    logger.setLevel(logging.DEBUG)
    logger.propagate = False

    formatter = logging.Formatter(_FORMAT, datefmt=_DATE_FORMAT)

    # 控制台处理器
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(_console_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # 文件处理器
    if _log_file is not None:
        file_handler = logging.FileHandler(_log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def configure_logging(level: str = "INFO", log_dir: Optional[Path] = None) -> None:
    """
    调整全部已创建 logger 的控制台级别，可选开启文件日志

    Args:
        level: 控制台日志级别 (DEBUG/INFO/WARNING...)
        log_dir: 日志目录；为 None 时不写文件
    """
    global _console_level, _log_file
    _console_level = logging.getLevelName(level.upper())
    if not isinstance(_console_level, int):
        _console_level = logging.INFO

    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        _log_file = log_dir / f"boost_{datetime.now().strftime('%Y%m%d')}.log"

    formatter = logging.Formatter(_FORMAT, datefmt=_DATE_FORMAT)
    for logger in logging.Logger.manager.loggerDict.values():
        if not isinstance(logger, logging.Logger) or not logger.handlers:
            continue
        has_file = False
        for handler in logger.handlers:
            if isinstance(handler, logging.FileHandler):
                has_file = True
            elif isinstance(handler, logging.StreamHandler):
                handler.setLevel(_console_level)
        if _log_file is not None and not has_file:
            file_handler = logging.FileHandler(_log_file, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)


class RunLogger:
    """
    实验运行日志 - 提供结构化的运行日志记录

    使用方式:
        log = RunLogger("train:a6a")
        log.start()
        log.step("第 1 轮: 评估 123456 次")
        log.checkpoint("训练误差 0.142", passed=True)
        log.end()
    """

    def __init__(self, run_name: str):
        """
        初始化运行日志

        Args:
            run_name: 运行名称
        """
        self.logger = get_logger(f"run.{run_name}")
        self.run_name = run_name
        self.step_count = 0

    def info(self, message: str) -> None:
        """记录信息日志"""
        self.logger.info(message)

    def error(self, message: str) -> None:
        """记录错误日志"""
        self.logger.error(f"❌ {message}")

    def warning(self, message: str) -> None:
        """记录警告日志"""
        self.logger.warning(f"⚠️ {message}")

    def debug(self, message: str) -> None:
        """记录调试日志"""
        self.logger.debug(message)

    def step(self, description: str, region: Optional[str] = None) -> None:
        """
        记录运行步骤

        Args:
            description: 步骤描述
            region: 所属阶段（可选）
        """
        self.step_count += 1
        region_str = f"[{region}] " if region else ""
        self.logger.info(f"步骤{self.step_count}: {region_str}{description}")

    def checkpoint(self, description: str, passed: bool = True) -> None:
        """
        记录检查点

        Args:
            description: 检查点描述
            passed: 是否通过
        """
        status = "✓" if passed else "✗"
        self.logger.info(f"   {status} 检查点: {description}")

    def start(self) -> None:
        """记录运行开始"""
        self.logger.info("=" * 60)
        self.logger.info(f"开始执行: {self.run_name}")
        self.logger.info("=" * 60)

    def end(self, success: bool = True) -> None:
        """
        记录运行结束

        Args:
            success: 运行是否成功
        """
        status = "✅ 完成" if success else "❌ 失败"
        self.logger.info(f"{status} - {self.run_name}")
        self.logger.info("=" * 60)
