"""Check reports shared by the kernels, the CLI and the suite runner."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    check: str
    passed: bool
    first_failure: Any = None
    precision_achieved: int | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "pass": self.passed,
            "first_failure": _plain(self.first_failure),
            "precision_achieved": self.precision_achieved,
        }
        if self.details:
            out["details"] = _plain(self.details)
        return out

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        tail = "" if self.passed or self.first_failure is None else \
            f" (first failure: {self.first_failure})"
        return f"{self.check}: {status}{tail}"


def _plain(v):
    """Coerce values into JSON-safe, deterministic primitives."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return "inf" if math.isinf(v) else v
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def combine(check: str, reports: list[Report]) -> Report:
    failed = next((r for r in reports if not r.passed), None)
    precs = [r.precision_achieved for r in reports if r.precision_achieved is not None]
    return Report(check, failed is None,
                  None if failed is None else f"{failed.check}: {failed.first_failure}",
                  min(precs) if precs else None,
                  {"parts": [r.to_json() for r in reports]})
