# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Errors
# ═══════════════════════════════════════════════════════════════
"""
统一异常层次

- 参数类错误同时继承 ValueError
- 内部一致性错误同时继承 RuntimeError
CLI 根据异常类型映射退出码（见 experiments/cli.py）。
"""

from typing import Optional


class BoostingError(Exception):
    """所有工具异常的基类"""


class ArgumentError(BoostingError, ValueError):
    """调用参数不合法（越界、空视图、非法配置）"""


class DatasetParseError(BoostingError, ValueError):
    """svmlight 文本解析失败"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        where = f"第 {line_no} 行: " if line_no is not None else ""
        super().__init__(f"{where}{message}")


class DegenerateWeightsError(BoostingError, ValueError):
    """权重总和为 0，无法归一化"""


class ContractViolationError(BoostingError, RuntimeError):
    """调用顺序违反契约（批次重叠/乱序、未评估就查询）"""


class OracleMismatchError(BoostingError, RuntimeError):
    """下界程序出现不可行约束，说明上游计算有误"""


class BoundTimeoutError(BoostingError):
    """分支定界超出节点预算；partial 仍是合法的下界估计"""

    def __init__(self, message: str, partial: int):
        self.partial = partial
        super().__init__(f"{message} (partial lower estimate: {partial})")


class InfiniteDivergenceError(BoostingError, ArithmeticError):
    """KL 散度为无穷（q ∈ {0, 1} 且 p ≠ q）"""


class ModelFormatError(BoostingError, ValueError):
    """模型文本格式错误"""
