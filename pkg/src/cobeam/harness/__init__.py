"""Experiment driver: configs, seeded paired Monte Carlo sweeps and export."""

from ..metrics import ia_residual, sum_rate, total_leakage
from .config import ExperimentConfig, ScenarioTemplate, load_config
from .experiment import CellStats, SweepResult, dof_slope, run_experiment, trial_seed_sequence
from .export import export_results, load_results

__all__ = [
    "ExperimentConfig",
    "ScenarioTemplate",
    "load_config",
    "CellStats",
    "SweepResult",
    "dof_slope",
    "run_experiment",
    "trial_seed_sequence",
    "export_results",
    "load_results",
    "sum_rate",
    "total_leakage",
    "ia_residual",
]
