"""Benchmark sweeps: configuration, execution, export and the command line."""

from .config import ConfigError, ExperimentConfig
from .export import export
from .runner import BenchmarkReport, run_experiment, verify_report

__all__ = [
    "BenchmarkReport",
    "ConfigError",
    "ExperimentConfig",
    "export",
    "run_experiment",
    "verify_report",
]
