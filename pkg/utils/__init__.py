# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Utils Module
# ═══════════════════════════════════════════════════════════════

from utils.logger import get_logger, configure_logging, RunLogger
from utils.config import ConfigManager

__all__ = ['get_logger', 'configure_logging', 'RunLogger', 'ConfigManager']
