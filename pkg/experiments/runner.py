# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Experiment Runner
# ═══════════════════════════════════════════════════════════════
"""
实验运行器 - 按配置训练并逐轮输出 CSV

CSV 列固定为 CSV_HEADER；未启用的下界留空，精确下界超时写 -1。
除 wall_ms 外，相同配置与种子的输出逐字节相同。
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.boosting import TIMEOUT_SENTINEL, Ensemble, LowerBoundMode, RoundMetrics, Variant, adaboost
from core.dataset import Dataset, load_dataset
from core.errors import ArgumentError
from core.stump_search import QuickBoostParams, Strategy
from utils.config import ConfigManager
from utils.logger import RunLogger

CSV_HEADER = "round,strategy,variant,depth,assess_round,assess_cum,train_err,test_err,wall_ms,lb_wo,lb_exact"


class ExperimentConfig(BaseModel):
    """一次实验运行的完整描述"""
    model_config = ConfigDict(frozen=True)

    data: Path
    test: Optional[Path] = None
    dim: Optional[int] = Field(default=None, ge=1)
    rounds: int = Field(default=100, ge=1)
    depth: int = Field(default=1, ge=1)
    strategy: Strategy = Strategy.ADAPTIVE
    variant: str = "none"
    seed: int = 0
    qb_batches: int = Field(default=16, ge=1)
    qb_init_mass: float = Field(default=0.25, gt=0, lt=1)
    lb: LowerBoundMode = LowerBoundMode.NONE
    tolerance: float = Field(default=1e-12, ge=0)
    node_budget: int = Field(default=10_000_000, ge=1)
    exact_max_examples: int = Field(default=2000, ge=1)
    out: Optional[Path] = None
    model_out: Optional[Path] = None

    @field_validator("data", "test")
    @classmethod
    def _file_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not Path(value).is_file():
            raise FileNotFoundError(f"文件不存在: {value}")
        return value

    @field_validator("strategy", mode="before")
    @classmethod
    def _parse_strategy(cls, value: Any) -> Strategy:
        return Strategy.parse(value)

    @field_validator("variant")
    @classmethod
    def _parse_variant(cls, value: str) -> str:
        return str(Variant.parse(value))

    @model_validator(mode="after")
    def _exact_needs_depth_one(self) -> "ExperimentConfig":
        if self.lb is LowerBoundMode.EXACT and self.depth != 1:
            raise ValueError("精确下界只支持 depth = 1")
        return self

    @classmethod
    def from_defaults(cls, **overrides: Any) -> "ExperimentConfig":
        """以 ConfigManager 中的默认值为底，覆盖非 None 的参数"""
        config = ConfigManager()
        boosting = config.get_boosting_config()
        qb = config.get_quickboost_config()
        bounds = config.get_lower_bound_config()
        values: Dict[str, Any] = {
            "rounds": boosting["rounds"],
            "depth": boosting["depth"],
            "strategy": boosting["strategy"],
            "variant": boosting["variant"],
            "seed": boosting["seed"],
            "qb_batches": qb["batches"],
            "qb_init_mass": qb["init_mass"],
            "tolerance": bounds["tolerance"],
            "node_budget": bounds["node_budget"],
            "exact_max_examples": bounds["exact_max_examples"],
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def variant_obj(self) -> Variant:
        return Variant.parse(self.variant)

    @property
    def qb_params(self) -> QuickBoostParams:
        return QuickBoostParams(self.qb_batches, self.qb_init_mass)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    train: Dataset
    ensemble: Ensemble
    history: List[RoundMetrics] = field(default_factory=list)

    @property
    def timed_out(self) -> bool:
        return any(m.lb_exact == TIMEOUT_SENTINEL for m in self.history)

    @property
    def total_assessments(self) -> int:
        return self.history[-1].assess_cum if self.history else 0

    @property
    def total_wall_ms(self) -> float:
        return sum(m.wall_ms for m in self.history)

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(format_row(self.config, m) for m in self.history)
        return "\n".join(lines) + "\n"


def _opt(value: Optional[Any], fmt: str = "") -> str:
    return "" if value is None else format(value, fmt)


def format_row(cfg: ExperimentConfig, m: RoundMetrics) -> str:
    fields = [
        str(m.round),
        cfg.strategy.value,
        cfg.variant,
        str(cfg.depth),
        str(m.assess_round),
        str(m.assess_cum),
        f"{m.train_err:.6f}",
        _opt(m.test_err, ".6f"),
        f"{m.wall_ms:.3f}",
        _opt(m.lb_wo),
        _opt(m.lb_exact),
    ]
    return ",".join(fields)


def write_atomic(path: Path, text: str) -> None:
    """先写同目录临时文件再 rename，读者不会看到半个文件"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """
    按配置训练并收集每轮指标；若配置了 out / model_out 则原子写入

    Raises:
        OSError: 数据文件不可读
        DatasetParseError: 数据格式错误
        ArgumentError: 精确下界的样本数超过上限
    """
    log = RunLogger(f"{cfg.strategy.short}:{cfg.data.name}")
    log.start()

    log.step(f"读取训练集 {cfg.data}", "Load")
    train = load_dataset(cfg.data, cfg.dim)
    test = None
    if cfg.test is not None:
        log.step(f"读取测试集 {cfg.test}", "Load")
        test = load_dataset(cfg.test, cfg.dim)

    if cfg.lb is LowerBoundMode.EXACT and train.n > cfg.exact_max_examples:
        raise ArgumentError(f"精确下界要求 n <= {cfg.exact_max_examples}，当前 n = {train.n}")

    def on_round(m: RoundMetrics) -> None:
        log.step(
            f"第 {m.round}/{cfg.rounds} 轮: 评估 {m.assess_round} 次 (累计 {m.assess_cum}), "
            f"训练误差 {m.train_err:.4f}",
            "Boost",
        )
        if m.lb_exact == TIMEOUT_SENTINEL:
            log.warning(f"第 {m.round} 轮精确下界超时，记为 {TIMEOUT_SENTINEL}")

    ensemble, history = adaboost(
        train, test,
        T=cfg.rounds,
        depth=cfg.depth,
        strategy=cfg.strategy,
        variant=cfg.variant_obj,
        seed=cfg.seed,
        qb=cfg.qb_params,
        lower_bounds=cfg.lb,
        tol=cfg.tolerance,
        node_budget=cfg.node_budget,
        on_round=on_round,
    )
    result = ExperimentResult(cfg, train, ensemble, history)

    if cfg.out is not None:
        write_atomic(cfg.out, result.csv_text())
        log.checkpoint(f"CSV 已写入 {cfg.out}")
    if cfg.model_out is not None:
        write_atomic(cfg.model_out, ensemble.dumps())
        log.checkpoint(f"模型已写入 {cfg.model_out}")

    log.checkpoint(f"累计评估 {result.total_assessments} 次", passed=True)
    log.end(success=not result.timed_out)
    return result
