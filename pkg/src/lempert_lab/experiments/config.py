"""Experiment configuration: domains, sampling schedule, thresholds, outputs."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Union

from ..errors import LempertLabError

EXPERIMENTS = ("example4", "theorem1", "proposition2", "estimates")


class ConfigError(LempertLabError, ValueError):
    """Malformed experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run.

    Attributes
    ----------
    experiment : str
        One of ``example4``, ``theorem1``, ``proposition2``, ``estimates``.
    domains : list of dict
        Domain descriptions (see :func:`lempert_lab.domain.build_domain`),
        plus ``{"kind": "ball", "n": 2}`` for the unit ball.
    schedule : dict
        Sampling schedule: distance sequences, grid sizes, family sizes.
    tolerances : dict
        Every verdict threshold; none is hard-coded in the runners.
    seed : int
        Seed for any randomized sampling.
    workers : int
        Threads used for per-sample work.
    output : dict
        Output file names relative to the output directory.
    """

    experiment: str
    domains: list = field(default_factory=list)
    schedule: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    workers: int = 1
    output: dict = field(default_factory=lambda: {"csv": "report.csv", "json": "report.json", "plots": "plots"})

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not self.schedule:
            raise ConfigError("schedule must be nonempty")
        for key, value in self.schedule.items():
            if isinstance(value, (list, tuple)) and not value:
                raise ConfigError(f"schedule entry {key!r} is empty")
        for key, value in self.tolerances.items():
            if not (isinstance(value, (int, float)) and value > 0):
                raise ConfigError(f"tolerance {key!r} must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def tol(self, key: str) -> float:
        try:
            return float(self.tolerances[key])
        except KeyError:
            raise ConfigError(f"missing tolerance {key!r}") from None

    def sched(self, key: str, default: Any = None) -> Any:
        if key in self.schedule:
            return self.schedule[key]
        if default is None:
            raise ConfigError(f"missing schedule entry {key!r}")
        return default

    def to_json(self) -> dict:
        return asdict(self)


def load_config(source: Union[str, Path, Mapping]) -> ExperimentConfig:
    """Read a config from a mapping, a JSON file or a JSON string."""
    if isinstance(source, Mapping):
        data = dict(source)
    else:
        text = str(source)
        data = json.loads(text if text.lstrip().startswith("{") else Path(text).read_text())
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def default_config(experiment: str) -> ExperimentConfig:
    """The bundled configuration for an experiment."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    text = resources.files(__package__).joinpath("configs", f"{experiment}.json").read_text()
    return load_config(text)
