"""Two-sided estimate of the best weak-type constant ``C_{n,s}``.

The lower bound comes from the test function ``|y|^(2-n)`` on the unit ball:
its potential exceeds ``lambda_0 = gamma_s (2^(n-s-2) c - d)`` on the ball of
radius 1/2, which certifies ``C_{n,s} >= lambda_0 (v_n 2^-n)^((n-s)/n) / ||f||_1``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np
from scipy.special import gammaln

from .constants import (CompositionParams, Params, composition_constant, in_lower_window,
                        lower_bound, riesz_constant, sharp_floor, sphere_area, tau_constant,
                        unit_ball_volume, upper_bound)
from .errors import DomainError
from .norms import DecreasingEnvelope, distribution, riesz_envelope, weak_norm
from .radial import RadialProfile, l1_norm

__all__ = [
    "test_function", "LowerBoundConstants", "pointwise_bound", "LevelSetRecord",
    "level_set_bound", "BoundsRow", "tabulate", "rows_to_csv", "rows_to_json",
    "COLUMNS", "EDGE_MARGIN",
]

COLUMNS = ("n", "s", "lower", "exact_floor", "witness_ratio", "upper", "tau_bound")
# Rows this close to the window edge s = (n-2)/4 are flagged, not computed.
EDGE_MARGIN = 1e-6


def test_function(p: Params) -> RadialProfile:
    """``f(y) = |y|^(2-n)`` for ``|y| < 1``, zero outside; ``||f||_1 = |S^(n-1)|/2``."""
    n = p.n
    if n <= 2:
        raise DomainError("the test function needs n > 2")
    nodes = np.geomspace(1e-6, 1.0, 61)
    return RadialProfile.from_function(lambda r: np.asarray(r, dtype=float) ** (2.0 - n), nodes,
                                       cutoff=1.0, label="test_function")


@dataclass(frozen=True)
class LowerBoundConstants:
    """``c``, ``d`` and the level ``lambda_0`` of the lower-bound construction."""

    c: float
    d: float
    lambda0: float

    @classmethod
    def from_params(cls, p: Params):
        p.require_lower_window()
        n, s = p.n, p.s
        lpi = 0.5 * n * math.log(math.pi)
        c = math.exp(math.log(4.0) + lpi - math.log(n - s - 2) - gammaln(0.5 * n - 1) - math.log(s))
        d = math.exp((n - s + 1) * math.log(2.0) + lpi - math.log(n - s - 2) - gammaln(0.5 * n))
        lam = riesz_constant(p) * (2.0 ** (n - s - 2) * c - d)
        return cls(c, d, lam)

    def c_equals_composition(self, p: Params):
        """``c`` is the composition constant with ``alpha = 2``; returns the relative gap."""
        other = composition_constant(CompositionParams(p, 2.0))
        return abs(self.c - other) / other


def pointwise_bound(p: Params, rho) -> float:
    """``c rho^-(n-s-2) - d``, a floor for ``I_s f(rho)/gamma_s`` on ``0 < rho <= 1/2``."""
    rho = float(rho)
    if not 0.0 < rho <= 0.5:
        raise DomainError("the pointwise bound holds for 0 < rho <= 1/2")
    k = LowerBoundConstants.from_params(p)
    return k.c * rho ** (-(p.n - p.s - 2)) - k.d


@dataclass
class LevelSetRecord:
    """Measured ``|{I_s f > lambda_0}|`` against ``v_n 2^-n`` and the closing algebra."""

    lambda0: float
    measured: float
    required: float
    holds: bool
    witness_ratio: float
    optimized_ratio: float
    chain_ratio: float
    identity_residual: float


def _test_envelope(p, radii=None):
    return riesz_envelope(test_function(p), p, radii, label="test_function")


def level_set_bound(p: Params, envelope: Optional[DecreasingEnvelope] = None, *,
                    rtol=1e-3) -> LevelSetRecord:
    """Check ``|{I_s f > lambda_0}| >= v_n 2^-n`` and the ratio chain that follows from it."""
    k = LowerBoundConstants.from_params(p)
    n, s = p.n, p.s
    F = envelope if envelope is not None else _test_envelope(p)
    f_l1 = sphere_area(n) / 2.0
    measured = distribution(F, p, k.lambda0)
    required = unit_ball_volume(n) * 2.0 ** (-n)
    witness = k.lambda0 * measured ** p.p / f_l1
    optimized = weak_norm(F, p).value / f_l1
    # lambda_0 v_n^p Gamma(n/2) / (2^(n-s) pi^(n/2)) should reproduce the lower bound exactly.
    chain = k.lambda0 * unit_ball_volume(n) ** p.p * math.exp(
        gammaln(0.5 * n) - (n - s) * math.log(2.0) - 0.5 * n * math.log(math.pi))
    residual = abs(chain - lower_bound(p)) / lower_bound(p)
    return LevelSetRecord(k.lambda0, measured, required, measured >= required * (1 - rtol),
                          witness, optimized, chain, residual)


@dataclass
class BoundsRow:
    """One ``(n, s)`` row of the two-sided table; ``None`` marks an absent column."""

    n: int
    s: float
    lower: Optional[float]
    exact_floor: float
    witness_ratio: Optional[float]
    upper: float
    tau_bound: float
    optimized_ratio: Optional[float] = None
    flags: List[str] = field(default_factory=list)

    def as_record(self):
        return {k: getattr(self, k) for k in COLUMNS}


def _row(n, s, witness, rtol):
    p = Params(n, s)
    row = BoundsRow(n, float(s), None, sharp_floor(p), None, upper_bound(p), tau_constant(p))
    if not in_lower_window(n, s):
        row.flags.append("outside lower-bound window n > 2, 0 < s < (n-2)/4")
        return row
    if (n - 2) / 4.0 - s < EDGE_MARGIN:
        row.flags.append("within EDGE_MARGIN of the window edge: lambda_0 degenerates")
        return row
    row.lower = lower_bound(p)
    if witness:
        rec = level_set_bound(p)
        row.witness_ratio = rec.witness_ratio
        row.optimized_ratio = rec.optimized_ratio
        if not rec.holds:
            row.flags.append("level set below v_n 2^-n")
        if not row.lower <= row.optimized_ratio * (1 + rtol):
            row.flags.append("lower bound exceeds optimized witness ratio")
        if not row.optimized_ratio <= row.upper * (1 + rtol):
            row.flags.append("optimized witness ratio exceeds upper bound")
        if not row.exact_floor <= row.optimized_ratio * (1 + rtol):
            row.flags.append("optimized witness ratio below the sharp floor")
    if not row.lower < row.upper:
        row.flags.append("lower bound not below upper bound")
    return row


def tabulate(n: int, s_grid, *, witness=False, rtol=1e-3, jobs=1) -> List[BoundsRow]:
    """Rows for each ``s``; per-row violations are collected in ``row.flags``."""
    s_grid = [float(s) for s in s_grid]
    if jobs > 1 and witness:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row, [n] * len(s_grid), s_grid, [witness] * len(s_grid),
                                 [rtol] * len(s_grid)))
    return [_row(n, s, witness, rtol) for s in s_grid]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v)
                         for v in (getattr(row, k) for k in COLUMNS)])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    body = {"schema": 1, "columns": list(COLUMNS),
            "rows": [dict(row.as_record(), flags=row.flags) for row in rows]}
    return json.dumps(body, indent=2)
