"""Verification reports shared by rule checks and the suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


def jsonable(value):
    """Convert params (complex numbers, tuples, numpy scalars) into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


@dataclass
class CheckRecord:
    key: str
    passed: bool
    deviation: float
    detail: dict = field(default_factory=dict)
    status: str = ""

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "passed": self.passed,
            "status": self.status or ("pass" if self.passed else "fail"),
            "deviation": _finite(self.deviation),
            "detail": jsonable(self.detail),
        }


@dataclass
class VerificationReport:
    suite: str
    records: list[CheckRecord] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    untranscribed: list[str] = field(default_factory=list)
    duration: float = 0.0

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def failed(self) -> int:
        return self.total - self.passed

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    @property
    def max_deviation(self) -> float:
        return max((r.deviation for r in self.records), default=0.0)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def sort(self) -> VerificationReport:
        self.records.sort(key=lambda r: _natural(r.key))
        self.untranscribed.sort(key=_natural)
        return self

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "config": jsonable(self.config),
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "max_deviation": _finite(self.max_deviation),
            "untranscribed": list(self.untranscribed),
            "failures": [r.to_json() for r in self.failures],
            "checks": [r.to_json() for r in self.records],
        }
        if timing:
            out["duration"] = self.duration
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, indent=2)

    def table(self) -> str:
        lines = [f"suite {self.suite}: {self.passed}/{self.total} passed"]
        width = max((len(r.key) for r in self.records), default=10)
        for r in self.records:
            flag = r.status or ("pass" if r.passed else "FAIL")
            lines.append(f"  {r.key:<{width}}  {flag:<6} {r.deviation:.17g}")
        for name in self.untranscribed:
            lines.append(f"  {name:<{width}}  untranscribed")
        lines.append(f"max deviation {self.max_deviation:.17g}; {self.failed} failed")
        return "\n".join(lines)


def _finite(x: float) -> float | None:
    """Shape mismatches carry an infinite deviation, which JSON cannot hold."""
    x = float(x)
    return x if np.isfinite(x) else None


def _natural(key: str):
    """Sort ``rule#10`` after ``rule#9``."""
    parts = []
    for chunk in key.replace("#", " # ").split():
        parts.append((0, int(chunk), "") if chunk.isdigit() else (1, 0, chunk))
    return parts
