"""Structured results of inequality and monotonicity checks, plus serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

TOLERANCE_ENV = "SPECBOUNDS_RTOL"
DEFAULT_RTOL = 1e-9

CSV_COLUMNS = ("law", "n", "p", "q", "z", "t", "lhs", "rhs", "slack", "verdict")


def default_rtol() -> float:
    """Relative tolerance for verdicts; overridable through ``SPECBOUNDS_RTOL``."""
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return DEFAULT_RTOL
    value = float(raw)
    if not value >= 0:
        raise ValueError(f"{TOLERANCE_ENV} must be a nonnegative number, got {raw!r}")
    return value


def verdict_tolerance(lhs: float, rhs: float, rtol: float | None = None) -> float:
    rtol = default_rtol() if rtol is None else rtol
    return rtol * max(abs(lhs), abs(rhs), 1.0)


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    return value


def _unjson(value):
    if value in ("inf", "-inf", "nan"):
        return float(value)
    return value


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of checking ``lhs <= rhs``; slack = rhs - lhs."""

    law: str
    lhs: float
    rhs: float
    tolerance: float
    context: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @classmethod
    def build(cls, law: str, lhs: float, rhs: float, *, rtol: float | None = None,
              tolerance: float | None = None, **context) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        if tolerance is None:
            tolerance = verdict_tolerance(lhs, rhs, rtol)
        return cls(law, lhs, rhs, float(tolerance), context)

    def to_dict(self) -> dict:
        return _jsonable({
            "kind": "inequality",
            "law": self.law,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "context": self.context,
        })

    def csv_row(self) -> dict:
        row = {k: self.context.get(k, "") for k in ("n", "p", "q", "z", "t")}
        row.update(law=self.law, lhs=self.lhs, rhs=self.rhs, slack=self.slack,
                   verdict=self.verdict)
        return row

    def __str__(self) -> str:
        ctx = ", ".join(f"{k}={v}" for k, v in self.context.items() if not isinstance(v, dict))
        return (f"[{self.verdict.upper()}] {self.law}: lhs={self.lhs:.12g} rhs={self.rhs:.12g} "
                f"slack={self.slack:.3e} tol={self.tolerance:.1e}" + (f" ({ctx})" if ctx else ""))


@dataclass(frozen=True)
class MonotonicityReport:
    """Sampled monotonicity of a composite quantity along a strictly increasing grid."""

    law: str
    grid: np.ndarray
    values: np.ndarray
    direction: str  # "nondecreasing" or "nonincreasing"
    tolerance: float
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
            raise ValueError("monotonicity grid must be strictly increasing")
        if self.direction not in ("nondecreasing", "nonincreasing"):
            raise ValueError(f"unknown direction {self.direction!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def max_violation(self) -> float:
        steps = np.diff(self.values)
        if steps.size == 0:
            return 0.0
        bad = -steps if self.direction == "nondecreasing" else steps
        return float(max(np.max(bad), 0.0))

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @classmethod
    def build(cls, law: str, grid, values, direction: str, *, rtol: float | None = None,
              **context) -> "MonotonicityReport":
        values = np.asarray(values, dtype=float)
        rtol = default_rtol() if rtol is None else rtol
        scale = float(np.max(np.abs(values))) if values.size else 0.0
        return cls(law, grid, values, direction, rtol * max(scale, 1e-300), context)

    def series(self) -> list[tuple[float, float]]:
        return list(zip(self.grid.tolist(), self.values.tolist()))

    def to_dict(self) -> dict:
        return _jsonable({
            "kind": "monotonicity",
            "law": self.law,
            "direction": self.direction,
            "grid": self.grid,
            "values": self.values,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "context": self.context,
        })

    def csv_row(self) -> dict:
        row = {k: self.context.get(k, "") for k in ("n", "p", "q", "z", "t")}
        row.update(law=self.law, lhs=self.max_violation, rhs=0.0, slack=-self.max_violation,
                   verdict=self.verdict)
        return row

    def __str__(self) -> str:
        return (f"[{self.verdict.upper()}] {self.law} ({self.direction}, {self.grid.size} pts): "
                f"max_violation={self.max_violation:.3e} tol={self.tolerance:.1e}")


Report = InequalityReport | MonotonicityReport


def report_from_dict(payload: dict) -> Report:
    context = {k: _unjson(v) for k, v in payload.get("context", {}).items()}
    if payload.get("kind") == "monotonicity":
        return MonotonicityReport(
            payload["law"], [_unjson(v) for v in payload["grid"]],
            [_unjson(v) for v in payload["values"]], payload["direction"],
            float(payload["tolerance"]), context,
        )
    return InequalityReport(
        payload["law"], float(_unjson(payload["lhs"])), float(_unjson(payload["rhs"])),
        float(payload["tolerance"]), context,
    )


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def reports_from_json(text: str) -> list[Report]:
    return [report_from_dict(item) for item in json.loads(text)]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()
