# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Experiments Module
# ═══════════════════════════════════════════════════════════════

from experiments.runner import CSV_HEADER, ExperimentConfig, ExperimentResult, run_experiment
from experiments.synthetic import SyntheticDataGenerator, SyntheticSpec, synthetic_dataset

__all__ = [
    'CSV_HEADER',
    'ExperimentConfig',
    'ExperimentResult',
    'run_experiment',
    'SyntheticDataGenerator',
    'SyntheticSpec',
    'synthetic_dataset',
]
