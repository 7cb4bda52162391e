"""Check records and the JSON verification report."""

from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, List, Optional

from . import __version__

__all__ = ["Check", "VerificationReport", "close", "at_least", "at_most", "flagged",
           "passed_if", "timed", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
STATUSES = ("pass", "fail", "flagged")


def _clean(value):
    # JSON has no inf/nan; keep them readable as strings.
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _clean(value.item())
    return value


@dataclass
class Check:
    """One verified statement: what was measured, against what, and how closely."""

    id: str
    anchor: str
    status: str
    measured: Any = None
    expected: Any = None
    tolerance: Optional[float] = None
    runtime_ms: float = 0.0
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self):
        return self.status != "fail"

    def to_dict(self):
        return _clean({"id": self.id, "anchor": self.anchor, "status": self.status,
                       "measured": self.measured, "expected": self.expected,
                       "tolerance": self.tolerance, "runtime_ms": round(self.runtime_ms, 3),
                       "detail": self.detail})


def _relerr(measured, expected):
    scale = abs(expected) if expected != 0 else 1.0
    return abs(measured - expected) / scale


def close(id, anchor, measured, expected, rtol, detail=""):
    """Pass when ``|measured - expected| <= rtol |expected|``."""
    measured = float(measured)
    expected = float(expected)
    ok = math.isfinite(measured) and _relerr(measured, expected) <= rtol
    err = _relerr(measured, expected) if math.isfinite(measured) else float("inf")
    note = f"relative error {err:.3e}" + (f"; {detail}" if detail else "")
    return Check(id, anchor, "pass" if ok else "fail", measured, expected, rtol, detail=note)


def at_least(id, anchor, measured, floor, rtol=0.0, detail=""):
    """Pass when ``measured >= floor (1 - rtol)``."""
    measured = float(measured)
    floor = float(floor)
    ok = measured >= floor - rtol * abs(floor)
    return Check(id, anchor, "pass" if ok else "fail", measured, floor, rtol, detail=detail)


def at_most(id, anchor, measured, ceiling, rtol=0.0, detail=""):
    """Pass when ``measured <= ceiling (1 + rtol)``."""
    measured = float(measured)
    ceiling = float(ceiling)
    ok = measured <= ceiling + rtol * abs(ceiling)
    return Check(id, anchor, "pass" if ok else "fail", measured, ceiling, rtol, detail=detail)


def passed_if(id, anchor, condition, measured=None, expected=None, detail=""):
    return Check(id, anchor, "pass" if condition else "fail", measured, expected, None, detail=detail)


def flagged(id, anchor, detail, measured=None):
    return Check(id, anchor, "flagged", measured, None, None, detail=detail)


@contextmanager
def timed(checks: List[Check]):
    """Spread the elapsed wall time over the checks appended inside the block."""
    start_len = len(checks)
    start = time.perf_counter()
    yield
    elapsed = (time.perf_counter() - start) * 1e3
    new = checks[start_len:]
    for c in new:
        c.runtime_ms = elapsed / len(new)


@dataclass
class VerificationReport:
    params: list = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    def add(self, *checks: Check):
        seen = {c.id for c in self.checks}
        for c in checks:
            if c.id in seen:
                raise ValueError(f"duplicate check id {c.id!r}")
            seen.add(c.id)
            self.checks.append(c)

    def extend(self, checks):
        self.add(*checks)

    def summary(self):
        counts = {s: 0 for s in STATUSES}
        for c in self.checks:
            counts[c.status] += 1
        return {"total": len(self.checks), **counts}

    def exit_code(self):
        return 1 if self.summary()["fail"] else 0

    def to_dict(self):
        return {"schema": SCHEMA_VERSION, "tool_version": __version__,
                "params": _clean(self.params),
                "checks": [c.to_dict() for c in self.checks],
                "summary": self.summary()}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)
