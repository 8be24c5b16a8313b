"""Experiment reports: rows, aggregates taken from the rows, and verdicts."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


def _json_safe(v):
    v = _plain(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, list):
        return [_json_safe(x) for x in v]
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    return v


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    value: object
    threshold: object
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail or self.value}"


@dataclass
class ExperimentReport:
    """Rows, aggregates and verdicts of one run.

    Aggregates are added through :meth:`aggregate`, which takes the exact
    minimum or maximum of a column over a subset of rows, so every aggregate
    is attained by some row.
    """

    experiment: str
    rows: list = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    series: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def add_row(self, **row):
        self.rows.append(row)

    def fail(self, stage: str, message: str, **context):
        self.failures.append({"stage": stage, "message": message, **_plain(context)})

    def select(self, **match):
        return [r for r in self.rows if all(r.get(k) == v for k, v in match.items())]

    def aggregate(self, name: str, column: str, how: str = "min", **match) -> float:
        """Store and return the min or max of ``column`` over matching rows."""
        rows = [r for r in self.select(**match) if r.get(column) is not None and np.isfinite(r[column])]
        if not rows:
            self.aggregates[name] = None
            return float("nan")
        pick = min if how == "min" else max
        value = float(pick(r[column] for r in rows))
        self.aggregates[name] = value
        return value

    def verdict(self, name, passed, value=None, threshold=None, detail=""):
        v = Verdict(name, bool(passed), _plain(value), _plain(threshold), detail)
        self.verdicts.append(v)
        return v

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(v.passed for v in self.verdicts)

    def columns(self):
        cols = []
        for r in self.rows:
            for k in r:
                if k not in cols:
                    cols.append(k)
        return cols

    def to_json(self) -> dict:
        return _json_safe(
            {
                "experiment": self.experiment,
                "passed": self.passed,
                "rows": len(self.rows),
                "aggregates": self.aggregates,
                "verdicts": [vars(v) for v in self.verdicts],
                "failures": self.failures,
                "config": self.config,
            }
        )

    def write(self, out_dir, csv_name="report.csv", json_name="report.json"):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        cols = self.columns()
        with open(out / csv_name, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            for r in self.rows:
                w.writerow({k: _csv_cell(r.get(k)) for k in cols})
        (out / json_name).write_text(json.dumps(self.to_json(), indent=2))
        return out / csv_name, out / json_name


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    return v
