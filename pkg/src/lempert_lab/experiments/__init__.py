"""Experiment harness: configs, runners, reports and SVG charts."""

from .config import EXPERIMENTS, ConfigError, ExperimentConfig, default_config, load_config
from .report import ExperimentReport, Verdict
from .runners import (
    RUNNERS,
    make_domain,
    run_estimates,
    run_example4,
    run_experiment,
    run_proposition2,
    run_theorem1,
)
from .svg import Chart

__all__ = [
    "EXPERIMENTS",
    "RUNNERS",
    "Chart",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "Verdict",
    "default_config",
    "load_config",
    "make_domain",
    "run_estimates",
    "run_example4",
    "run_experiment",
    "run_proposition2",
    "run_theorem1",
]
