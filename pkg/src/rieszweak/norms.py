"""Distribution functions, weak and grand norms of radial decreasing envelopes.

For a radial non-increasing ``F`` every super-level set is a centered ball,
so the distribution function is ``v_n rho*(lambda)^n`` with
``rho*(lambda) = sup{rho : F(rho) > lambda}``, and the supremum over sets in
the grand norm may be taken over centered balls.  Both norms therefore reduce
to one-dimensional searches over the radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from ._quadrature import aitken_limit, decade_points, golden_max, integrate
from .constants import Params, grand_norm_factor, riesz_constant, sphere_area, unit_ball_volume
from .errors import DivergentNormError, DomainError, ExtrapolationError, InvariantViolation
from .radial import (RadialProfile, WitnessConfig, fractional_maximal, resolve_witness_radius,
                     riesz_potential)

__all__ = [
    "DecreasingEnvelope", "NormResult", "EquivalenceTriple", "default_radii",
    "distribution", "weak_norm", "grand_norm", "equivalence_check",
    "small_lambda_limit", "witness_lower_bound", "witness_limit",
    "riesz_envelope", "maximal_envelope", "envelope_radii", "far_field_envelope",
]

_GL_X, _GL_W = leggauss(30)
# Golden refinement tolerance in log-radius.
_LOG_XTOL = 1e-10


def default_radii(per_decade=8):
    """Log-spaced sampling radii ``1e-4 ... 1e6``."""
    return np.logspace(-4, 6, 10 * per_decade + 1)


@dataclass(frozen=True, eq=False)
class DecreasingEnvelope:
    """Non-increasing radial function ``F`` sampled on positive radii.

    Between samples ``F`` is the PCHIP interpolant of ``log F`` against
    ``log rho``; below the first radius it is held at ``values[0]``; past the
    last radius it is ``rho**(-tail_exp) (tail_coeff - c rho**(-kappa))``
    with ``(c, kappa) = tail_corr`` (no correction when ``tail_corr`` is
    ``None``; zero when ``tail_coeff`` is ``None``).  ``tail_spread`` is the
    relative uncertainty of an extrapolated ``tail_coeff``.  ``func`` replaces
    the interpolant on the sampled range when an exact evaluator exists.
    """

    radii: np.ndarray
    values: np.ndarray
    tail_coeff: Optional[float] = None
    tail_exp: Optional[float] = None
    func: Optional[Callable] = None
    label: str = ""
    _log_interp: object = field(default=None, init=False, repr=False)
    tail_corr: Optional[tuple] = None
    tail_spread: float = 0.0

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if radii.size < 2 or radii.size != values.size:
            raise DomainError("an envelope needs at least two radii and one value per radius")
        if radii[0] <= 0 or np.any(np.diff(radii) <= 0):
            raise DomainError("envelope radii must be positive and strictly increasing")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise DomainError("envelope values must be finite and non-negative")
        if np.any(np.diff(values) > 1e-12 * values[0]):
            raise DomainError("envelope values must be non-increasing")
        if self.tail_coeff is not None and not (self.tail_coeff >= 0 and self.tail_exp and self.tail_exp > 0):
            raise DomainError("a tail needs a non-negative coefficient and a positive exponent")
        values = np.minimum.accumulate(values)
        if self.tail_corr is not None:
            c, kappa = (float(x) for x in self.tail_corr)
            q = self.tail_exp
            # the corrected tail must itself be non-increasing past the last radius
            if self.tail_coeff is None or not kappa > 0 or (
                    c > 0 and q * self.tail_coeff <= c * (q + kappa) * radii[-1] ** -kappa):
                raise DomainError("tail correction breaks monotonicity")
            object.__setattr__(self, "tail_corr", (c, kappa))
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        if self.func is None:
            if np.any(values <= 0):
                raise DomainError("sampled envelopes must be strictly positive; use func for steps")
            object.__setattr__(self, "_log_interp",
                               PchipInterpolator(np.log(radii), np.log(values), extrapolate=False))

    @classmethod
    def from_function(cls, func, radii, *, tail_coeff=None, tail_exp=None, label=""):
        radii = np.asarray(radii, dtype=float)
        return cls(radii, np.asarray(func(radii), dtype=float), tail_coeff, tail_exp, func, label)

    @classmethod
    def matched(cls, radii, values, tail_exp, *, func=None, label=""):
        """Attach ``C rho**(-tail_exp)`` continuous with the last sample."""
        radii = np.asarray(radii, dtype=float)
        values = np.asarray(values, dtype=float)
        coeff = float(values[-1] * radii[-1] ** tail_exp)
        return cls(radii, values, coeff, tail_exp, func, label)

    @property
    def last(self):
        return float(self.radii[-1])

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.empty_like(rho)
        below = rho < self.radii[0]
        inside = (rho >= self.radii[0]) & (rho <= self.last)
        above = rho > self.last
        if self.func is not None:
            out[below | inside] = np.asarray(self.func(rho[below | inside]), dtype=float)
        else:
            out[below] = self.values[0]
            out[inside] = np.exp(self._log_interp(np.log(rho[inside])))
        out[above] = self._tail(rho[above])
        return out if out.ndim else float(out)

    def _tail(self, rho):
        if self.tail_coeff is None:
            return np.zeros_like(rho)
        coeff = self.tail_coeff
        if self.tail_corr is not None:
            c, kappa = self.tail_corr
            coeff = coeff - c * rho ** -kappa
        return coeff * rho ** (-self.tail_exp)

    def scaled(self, c):
        c = float(c)
        func = None if self.func is None else (lambda r, f=self.func: c * f(r))
        coeff = None if self.tail_coeff is None else c * self.tail_coeff
        corr = None if self.tail_corr is None else (c * self.tail_corr[0], self.tail_corr[1])
        return DecreasingEnvelope(self.radii, c * self.values, coeff, self.tail_exp, func, self.label,
                                  tail_corr=corr, tail_spread=self.tail_spread)

    def level_radius(self, lam):
        """``sup{rho : F(rho) > lam}``, ``inf`` when every radius qualifies."""
        lam = float(lam)
        if not lam > 0:
            raise DomainError("level must be positive")
        if lam < self.values[-1]:
            if self.tail_coeff is None or self.tail_coeff == 0:
                return self.last
            if self.tail_corr is None:
                return max(self.last, (self.tail_coeff / lam) ** (1.0 / self.tail_exp))
            c, kappa = self.tail_corr
            # the tail is decreasing and below (C + max(0, -c) last^-kappa) rho^-q
            top = ((self.tail_coeff + max(0.0, -c) * self.last ** -kappa) / lam) ** (1.0 / self.tail_exp)

            def gap(x):
                return float(self._tail(np.array([x]))[0]) - lam

            if top <= self.last or gap(self.last) <= 0:
                return self.last
            return brentq(gap, self.last, top, xtol=1e-15 * top, rtol=1e-15)
        # Ties go to the larger radius: the first sample with value <= lam ends the set.
        j = int(np.argmax(self.values <= lam))
        if j == 0:
            if self.func is None:
                return 0.0
            lo, hi = self.radii[0] * 1e-12, self.radii[0]
        else:
            lo, hi = self.radii[j - 1], self.radii[j]

        def excess(x):
            return float(self(np.array([x]))[0]) - lam

        if excess(hi) > 0:
            return hi
        if excess(lo) <= 0:
            return 0.0
        return brentq(excess, lo, hi, xtol=1e-15 * hi, rtol=1e-15)


@dataclass(frozen=True)
class NormResult:
    """A supremum and where it sits.

    ``maximizer`` is the level ``lambda`` for weak norms and the ball radius
    for grand norms.  When ``attained_in_limit`` is set the supremum is
    approached as ``lambda -> 0`` (radius -> infinity): ``maximizer`` is then
    the last sampled point and ``last_sampled`` the value there.
    """

    value: float
    maximizer: float
    attained_in_limit: bool
    last_sampled: float
    tolerance: float

    def to_dict(self):
        return {"value": self.value, "maximizer": self.maximizer,
                "attained_in_limit": self.attained_in_limit,
                "last_sampled": self.last_sampled, "tolerance": self.tolerance}


def distribution(F: DecreasingEnvelope, p: Params, lam: float) -> float:
    """``|{x : F(|x|) > lam}| = v_n rho*(lam)^n``."""
    return unit_ball_volume(p.n) * F.level_radius(lam) ** p.n


def _tail_limit_weak(F, p):
    q = p.n - p.s
    if F.tail_coeff is None or F.tail_coeff == 0:
        return 0.0
    if F.tail_exp < q * (1 - 1e-12):
        raise DivergentNormError(
            f"envelope decays like rho^-{F.tail_exp}, slower than rho^-{q}: weak norm is infinite")
    if F.tail_exp > q * (1 + 1e-12):
        return 0.0
    return unit_ball_volume(p.n) ** p.p * F.tail_coeff


def weak_norm(F: DecreasingEnvelope, p: Params) -> NormResult:
    """``sup_lambda lambda |{F > lambda}|^((n-s)/n)``.

    Parametrized by the radius: a level just below ``F(rho)`` has measure at
    least ``v_n rho^n``, so the norm is ``sup_rho v_n^p rho^(n-s) F(rho-)``.
    The sampled maximum is refined by golden section in ``log rho`` and
    compared with the tail limit ``v_n^p C``.
    """
    q = p.n - p.s
    vp = unit_ball_volume(p.n) ** p.p
    limit = _tail_limit_weak(F, p)

    def phi(log_r):
        r = math.exp(log_r)
        # left limit, so a jump at r still counts its upper value
        return vp * r ** q * float(F(np.array([r * (1 - 4e-16)]))[0])

    logs = np.log(F.radii)
    samples = vp * F.radii ** q * F.values
    if F.func is not None:
        samples = np.array([phi(x) for x in logs])
    i = int(np.argmax(samples))
    lo, hi = logs[max(i - 1, 0)], logs[min(i + 1, logs.size - 1)]
    x_best, best = golden_max(phi, lo, hi, xtol=_LOG_XTOL)
    if samples[i] > best:
        x_best, best = logs[i], samples[i]
    last = float(samples[-1])
    if _rising_to_limit(samples, i, limit, best):
        value = max(limit, best)
        return NormResult(value, float(F.values[-1]), True, last, F.tail_spread * value)
    lam = float(F(np.array([math.exp(x_best) * (1 - 4e-16)]))[0])
    return NormResult(float(best), lam, False, last, 0.0)


def _rising_to_limit(samples, i, limit, best):
    # The supremum sits at infinity when the tail limit beats every sample, or
    # when the scan peaks at its last point while still climbing.
    if limit > best * (1 + 1e-12):
        return True
    climbing = samples.size > 1 and samples[-1] > samples[-2] * (1 + 1e-13)
    return limit > 0 and i == samples.size - 1 and climbing


def _head_integral(F, r, n):
    """``int_0^rho0 F^r t^(n-1) dt`` and its growth exponent ``m``.

    ``F`` below the first radius is modelled as ``F(rho0) (t/rho0)^-kappa``
    with ``kappa`` read off the first two samples, so the mass below any
    ``rho <= rho0`` is ``head * (rho/rho0)^m``.
    """
    r0, r1 = F.radii[0], F.radii[1]
    v0, v1 = F(np.array([r0, r1]))
    kappa = 0.0
    if v0 > 0 and v1 > 0:
        kappa = max(0.0, -math.log(v1 / v0) / math.log(r1 / r0))
        if kappa < 1e-9 or F.func is None:
            kappa = 0.0
    m = n - kappa * r
    if m <= 0:
        raise DivergentNormError("envelope is not locally L^r near the origin")
    return v0 ** r * r0 ** n / m, m


def _interval_integrals(F, r, n, a, b):
    # int_a^b F^r t^(n-1) dt in log t with fixed 30-point Gauss-Legendre per interval
    la, lb = np.log(a), np.log(b)
    half = 0.5 * (lb - la)
    mid = 0.5 * (lb + la)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    t = np.exp(x)
    vals = F(t.ravel()).reshape(t.shape)
    return (vals ** r * t ** n) @ _GL_W * half


def grand_norm(F: DecreasingEnvelope, p: Params, r: float) -> NormResult:
    """``sup_B |B|^(-1/r + (n-s)/n) (int_B F^r)^(1/r)`` over centered balls."""
    n = p.n
    factor = grand_norm_factor(p, r)  # validates r
    q = n - p.s
    v = unit_ball_volume(n)
    omega = sphere_area(n)
    radii = F.radii
    cum = np.empty(radii.size)
    head, m_head = _head_integral(F, r, n)
    cum[0] = head
    cum[1:] = cum[0] + np.cumsum(_interval_integrals(F, r, n, radii[:-1], radii[1:]))

    def G_from(rho, mass):
        return (v * rho ** n) ** (-1.0 / r + p.p) * (omega * mass) ** (1.0 / r)

    samples = G_from(radii, cum)
    limit = 0.0
    if F.tail_coeff:
        if F.tail_exp < q * (1 - 1e-12):
            raise DivergentNormError("envelope decays too slowly: grand norm is infinite")
        if F.tail_exp <= q * (1 + 1e-12):
            limit = F.tail_coeff * v ** p.p * factor
    i = int(np.argmax(samples))
    logs = np.log(radii)

    def G(log_rho):
        rho = math.exp(log_rho)
        j = int(np.searchsorted(radii, rho, side="right")) - 1
        if j < 0:
            mass = head * (rho / radii[0]) ** m_head
        elif j >= radii.size - 1:
            mass = cum[-1]
        else:
            mass = cum[j] + float(_interval_integrals(F, r, n, np.array([radii[j]]), np.array([rho]))[0])
        return G_from(rho, mass)

    lo, hi = logs[max(i - 1, 0)], logs[min(i + 1, logs.size - 1)]
    x_best, best = golden_max(G, lo, hi, xtol=_LOG_XTOL)
    if samples[i] > best:
        x_best, best = logs[i], samples[i]
    last = float(samples[-1])
    if _rising_to_limit(samples, i, limit, best):
        value = max(limit, best)
        return NormResult(float(value), float(radii[-1]), True, last, F.tail_spread * value)
    return NormResult(float(best), math.exp(x_best), False, last, 0.0)


class EquivalenceTriple(NamedTuple):
    weak: float
    grand: float
    bound: float


def equivalence_check(F: DecreasingEnvelope, p: Params, r: float, *, slack=1e-6) -> EquivalenceTriple:
    """``weak <= grand <= (n/(n - r(n-s)))^(1/r) weak``, raising if violated beyond ``slack``.

    The sandwich holds for every ``0 < r < n/(n-s)``, not only ``r >= 1``.
    """
    weak = weak_norm(F, p).value
    grand = grand_norm(F, p, r).value
    bound = grand_norm_factor(p, r) * weak
    if weak > grand * (1 + slack):
        raise InvariantViolation(f"weak norm {weak!r} exceeds grand norm {grand!r} at r={r}")
    if grand > bound * (1 + slack):
        raise InvariantViolation(f"grand norm {grand!r} exceeds its bound {bound!r} at r={r}")
    return EquivalenceTriple(weak, grand, bound)


def small_lambda_limit(F: DecreasingEnvelope, p: Params, *, lam0=None, ratio=None, terms=6,
                       rtol=1e-6) -> float:
    """``lim_{lambda -> 0} lambda |{F > lambda}|^((n-s)/n)`` by Aitken extrapolation.

    The levels form a geometric sequence starting at ``lam0`` (default
    ``F(1)``) with ratio ``10^-(n-s)`` so that the level radii grow tenfold
    per step; only levels inside the sampled range are used.
    """
    q = p.n - p.s
    if lam0 is None:
        lam0 = float(F(np.array([min(1.0, F.last)]))[0])
    if ratio is None:
        ratio = 10.0 ** (-q)
    floor = float(F.values[-1])
    lams = [lam0 * ratio ** k for k in range(terms)]
    lams = [lam for lam in lams if lam > floor] or [lam0]
    seq = [lam * distribution(F, p, lam) ** p.p for lam in lams]
    if len(seq) < 3:
        raise ExtrapolationError("fewer than three levels inside the sampled range")
    estimates = [aitken_limit(seq[: k + 1]) for k in range(2, len(seq))]
    final = estimates[-1]
    spread = abs(estimates[-1] - estimates[-2]) if len(estimates) > 1 else abs(seq[-1] - seq[-2])
    if not math.isfinite(final) or spread > max(rtol, 1e-3) * abs(final):
        raise ExtrapolationError(f"small-level sequence did not settle: {seq}")
    return final


def witness_lower_bound(f: RadialProfile, cfg: WitnessConfig, p: Params) -> float:
    """Grand-norm floor from the ball ``B_{lR}`` for a profile with mass ``1-eps`` in ``B_R``.

    Equals ``gamma_s v_n^p n^(1/r) (1-eps) l^(n-s-n/r) (int_0^l t^(n-1) (t+1)^(-(n-s) r) dt)^(1/r)``
    and increases to :func:`witness_limit` as ``l -> inf``.
    """
    cfg.check(p)
    resolve_witness_radius(f, cfg, p)
    n, s, r, l = p.n, p.s, cfg.r, float(cfg.l)
    q = n - s

    def integrand(t):
        return t ** (n - 1) * (t + 1.0) ** (-q * r)

    # The power map at 0 is unnecessary: t^(n-1) is smooth for integer n >= 1.
    inner = integrate(integrand, 0.0, l, points=decade_points(0.0, l), epsrel=1e-12)
    log_val = (math.log(riesz_constant(p)) + p.p * math.log(unit_ball_volume(n))
               + math.log(n) / r + math.log(1.0 - cfg.epsilon)
               + (q - n / r) * math.log(l) + math.log(inner) / r)
    return math.exp(log_val)


def witness_limit(cfg: WitnessConfig, p: Params) -> float:
    """``gamma_s v_n^p (1-eps) (n/(n-(n-s) r))^(1/r)``: the ``l -> inf`` limit."""
    cfg.check(p)
    return (riesz_constant(p) * unit_ball_volume(p.n) ** p.p * (1.0 - cfg.epsilon)
            * grand_norm_factor(p, cfg.r))


# envelope builders -------------------------------------------------------------
def envelope_radii(f: RadialProfile, per_decade=8) -> np.ndarray:
    """:func:`default_radii` plus points clustered geometrically on both sides of a cutoff.

    Potentials of profiles with a jump have an ``|rho - c|^s`` kink at the
    cutoff ``c`` that a log-spaced grid alone cannot resolve.
    """
    radii = default_radii(per_decade)
    if f.cutoff is not None:
        c = f.cutoff
        offsets = np.geomspace(1e-8, 0.5, 4 * per_decade)
        radii = np.concatenate([radii, c * (1 - offsets), c * (1 + offsets)])
    return np.unique(radii[radii > 0])


def _decade_index(radii, target):
    j = int(np.argmin(np.abs(np.log(radii / target))))
    return j if abs(math.log(radii[j] / target)) < 1e-9 else None


def far_field_envelope(radii, values, q, *, label="") -> DecreasingEnvelope:
    """Envelope whose tail extrapolates ``rho^q F`` to its ``rho -> inf`` limit.

    With ``w_k = rho_k^q F(rho_k)`` at the last radius ``R`` and at ``R/10``,
    ``R/100``, Aitken's step fits ``w = C - c rho^-kappa``; a second fit one
    decade earlier gives ``tail_spread``.  Without decade-spaced samples or a
    geometric trend the tail is matched to the last sample instead.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.minimum.accumulate(np.asarray(values, dtype=float))
    idx = [_decade_index(radii, radii[-1] / 10.0 ** k) for k in range(4)]
    plain = DecreasingEnvelope.matched(radii, values, q, label=label)
    if None in idx[:3] or np.any(values[idx[:3]] <= 0):
        return plain
    w = values * radii ** q

    def fit(i0, i1, i2):
        d1, d2 = w[i1] - w[i0], w[i2] - w[i1]
        if d1 == 0 or not 0 < d2 / d1 < 1:
            return None
        theta = d2 / d1
        return w[i2] + d2 * theta / (1 - theta), -math.log10(theta)

    first = fit(idx[2], idx[1], idx[0])
    if first is None:
        return plain
    C, kappa = first
    c = (C - w[idx[0]]) * radii[-1] ** kappa
    spread = abs(C - w[idx[0]]) / C
    if idx[3] is not None:
        second = fit(idx[3], idx[2], idx[1])
        spread = abs(C - second[0]) / C if second is not None else spread
    try:
        return DecreasingEnvelope(radii, values, C, q, None, label, tail_corr=(c, kappa),
                                  tail_spread=spread)
    except DomainError:
        return plain


def riesz_envelope(f: RadialProfile, p: Params, radii=None, *, label="riesz") -> DecreasingEnvelope:
    """Sample ``I_s f`` and attach the extrapolated far-field tail ``~ C rho^(s-n)``."""
    radii = envelope_radii(f) if radii is None else np.asarray(radii, dtype=float)
    values = np.array([riesz_potential(f, p, r) for r in radii])
    return far_field_envelope(radii, values, p.n - p.s, label=label)


def maximal_envelope(f: RadialProfile, p: Params, radii=None, *, label="maximal") -> DecreasingEnvelope:
    """Sample ``M_s f`` and attach the extrapolated far-field tail ``~ C rho^(s-n)``."""
    radii = envelope_radii(f, per_decade=4) if radii is None else np.asarray(radii, dtype=float)
    values = np.array([fractional_maximal(f, p, r) for r in radii])
    return far_field_envelope(radii, values, p.n - p.s, label=label)
