"""Heat semigroup, subordination of the Riesz potential, and the time-split bound.

``I_s f = Gamma(s/2)^-1 int_0^inf t^(s/2-1) P_t * f dt`` with the Gaussian
``P_t(x) = (4 pi t)^(-n/2) exp(-|x|^2/(4t))``.  For a fixed radius the map
``t -> P_t * f`` is sampled once on a composite Gauss-Legendre grid in
``u = log t``; every time integral (the full subordination integral, the
pieces below and above a split time, the running averages behind ``M^0``)
is then read off that one sample set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from numpy.polynomial import legendre as L
from scipy.special import gammaln, ive

from ._quadrature import decade_points, golden_max, integrate
from .constants import Params, gamma_fn, riesz_constant, sphere_area, tau_constant, upper_bound
from .constants import tau_majorant, unit_ball_volume
from .errors import DomainError
from .radial import RadialProfile, l1_norm, riesz_potential

__all__ = [
    "heat_kernel", "heat_convolve", "TimeProfile", "time_profile", "subordination_check",
    "averaged_maximal", "HeatSplit", "split_bound", "dyadic_j1", "tau_minimized",
    "envelope_a3", "TauRecord", "pointwise_tau_bound", "asymptotic_comparison",
    "log_majorization_holds", "averaged_maximal_weak11", "subordinated_potential",
    "ComparisonRow", "COMPARISON_COLUMNS", "RATIO_WINDOW",
]

# Gaussian factors below exp(-_GAUSS_CUT) are dropped.
_GAUSS_CUT = 700.0
_PANEL_ORDER = 12
_GL_X, _GL_W = L.leggauss(_PANEL_ORDER)
_T_MIN = 1e-16


def heat_kernel(p: Params, t, rho):
    """``(4 pi t)^(-n/2) exp(-rho^2 / (4t))``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("time must be positive")
    rho = np.asarray(rho, dtype=float)
    out = (4.0 * math.pi * t) ** (-0.5 * p.n) * np.exp(-rho * rho / (4.0 * t))
    return out if out.ndim else float(out)


def _log_angular(n, z):
    """``log int_{S^(n-1)} exp(z cos theta) d omega - z`` for ``z >= 0``."""
    z = np.asarray(z, dtype=float)
    nu = 0.5 * n - 1.0
    out = np.empty_like(z)
    small = z * z < 1e-8 * (nu + 1.0)
    # (2 pi)^(n/2) z^(-nu) I_nu(z) -> |S^(n-1)| (1 + z^2/(4(nu+1))) as z -> 0
    zs = z[small]
    out[small] = math.log(sphere_area(n)) + np.log1p(zs * zs / (4.0 * (nu + 1.0))) - zs
    zl = z[~small]
    with np.errstate(divide="ignore"):
        out[~small] = 0.5 * n * math.log(2 * math.pi) - nu * np.log(zl) + np.log(_ive(nu, zl))
    return out


# scipy's ive returns nan above ~1.7e9; the Hankel expansion is exact to
# rounding well before that.
_HANKEL_FROM = 1e7


def _ive(nu, z):
    out = np.empty_like(z)
    big = z > _HANKEL_FROM
    out[~big] = ive(nu, z[~big])
    zb = z[big]
    mu = 4.0 * nu * nu
    e = 8.0 * zb
    out[big] = (1.0 - (mu - 1) / e + (mu - 1) * (mu - 9) / (2 * e * e)) / np.sqrt(2 * math.pi * zb)
    return out


def _heat_weight(p: Params, t: float, rho: float, v):
    """Angular average of ``P_t(rho e_1 - sig w)`` times ``sig^(n-1)``, ``sig = rho + v``.

    The offset ``v`` enters the Gaussian exactly, so narrow kernels far from
    the origin keep full relative accuracy.
    """
    n = p.n
    v = np.asarray(v, dtype=float)
    sig = np.maximum(rho + v, 0.0)
    z = rho * sig / (2.0 * t)
    with np.errstate(divide="ignore"):
        log_sig = (n - 1) * np.log(sig) if n > 1 else np.zeros_like(sig)
    log_w = (-0.5 * n * math.log(4 * math.pi * t) - v * v / (4.0 * t)
             + _log_angular(n, z) + log_sig)
    if n == 1:
        log_w = np.where(sig == 0, -0.5 * math.log(4 * math.pi * t) - rho * rho / (4 * t)
                         + math.log(2.0), log_w)
    return np.exp(log_w)


def heat_convolve(f: RadialProfile, p: Params, t: float, rho: float, *, epsrel=1e-10) -> float:
    """``(P_t * f)(x)`` at ``|x| = rho``."""
    t = float(t)
    rho = float(rho)
    if not t > 0:
        raise DomainError("time must be positive")
    if rho < 0:
        raise DomainError("radius must be non-negative")
    width = 2.0 * math.sqrt(t)
    reach = 2.0 * math.sqrt(_GAUSS_CUT * t)
    lo = max(0.0, rho - reach)
    hi = rho + reach
    if f.cutoff is not None:
        hi = min(hi, f.cutoff)
    if hi <= lo:
        return 0.0
    steps = width * np.array([0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0])
    pts = np.concatenate([f.breakpoints(), decade_points(lo, hi)])
    if f.func is not None and f.nodes[0] == 0:
        pts = np.concatenate([pts, f.nodes[f.nodes < hi][::8]])
    # breakpoints as offsets from rho; the Gaussian scale ones are exact
    pts = np.concatenate([pts[(pts > lo) & (pts < hi)] - rho, -steps, steps, [0.0]])

    def integrand(v):
        w = _heat_weight(p, t, rho, v)
        # zero weight at the origin must not meet a singular profile value
        live = w > 0
        out = np.zeros_like(w)
        out[live] = w[live] * f(np.maximum(rho + np.asarray(v, dtype=float)[live], 0.0))
        return out

    return float(integrate(integrand, lo - rho, hi - rho, points=pts, epsrel=epsrel))


# time profiles ---------------------------------------------------------------
_VANDER = L.legvander(_GL_X, _PANEL_ORDER - 1)
_COEF_SCALE = (2.0 * np.arange(_PANEL_ORDER) + 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class TimeProfile:
    """``t -> (P_t * f)(rho)`` sampled on unit panels in ``u = log t``.

    ``p_lo`` is the value at ``t_lo``, used as the constant below it;
    ``p_hi`` and ``kappa`` describe the power-law decay ``t^-kappa`` past
    ``t_hi``.
    """

    n: int
    rho: float
    edges: np.ndarray
    t: np.ndarray
    values: np.ndarray
    p_lo: float
    p_hi: float
    kappa: float

    @property
    def t_lo(self):
        return math.exp(self.edges[0])

    @property
    def t_hi(self):
        return math.exp(self.edges[-1])

    def _coefficients(self, a):
        # Legendre coefficients of t^a P_t on every panel (a = s/2 or 1).
        y = self.t ** a * self.values
        return (y * _GL_W) @ _VANDER * _COEF_SCALE

    def _panel_integrals(self, a):
        half = 0.5 * np.diff(self.edges)
        return self._coefficients(a)[:, 0] * 2.0 * half

    def head(self, a):
        """``int_0^t_lo t^(a-1) P_t dt`` with ``P`` frozen at ``t_lo``."""
        return self.p_lo * self.t_lo ** a / a

    def tail(self, a):
        """``int_t_hi^inf t^(a-1) P_t dt`` under the fitted power decay."""
        if not self.kappa > a:
            raise DomainError(f"P_t f decays like t^-{self.kappa:.3g}: the time integral diverges")
        return self.p_hi * self.t_hi ** a / (self.kappa - a)

    def total(self, a):
        """``int_0^inf t^(a-1) P_t dt``."""
        return self.head(a) + float(self._panel_integrals(a).sum()) + self.tail(a)

    def upto(self, a, T):
        """``int_0^T t^(a-1) P_t dt`` for any ``T > 0``."""
        T = float(T)
        if not T > 0:
            raise DomainError("upper time must be positive")
        if T <= self.t_lo:
            return self.p_lo * T ** a / a
        if T >= self.t_hi:
            past = self.p_hi * (self.t_hi ** (a - self.kappa) - T ** (a - self.kappa)) * self.t_hi ** self.kappa
            return self.head(a) + float(self._panel_integrals(a).sum()) + past / (a - self.kappa)
        u = math.log(T)
        i = min(int(np.searchsorted(self.edges, u, side="right")) - 1, self.edges.size - 2)
        half = 0.5 * (self.edges[i + 1] - self.edges[i])
        x = (u - self.edges[i]) / half - 1.0
        anti = L.legint(self._coefficients(a)[i], lbnd=-1)
        partial = float(L.legval(x, anti)) * half
        return self.head(a) + float(self._panel_integrals(a)[:i].sum()) + partial


def time_profile(f: RadialProfile, p: Params, rho: float, *, t_min=_T_MIN, t_max=None,
                 epsrel=1e-11) -> TimeProfile:
    """Sample ``(P_t * f)(rho)`` for ``t_min <= t <= t_max`` (default ``1e12 max(1, rho^2)``)."""
    rho = float(rho)
    if t_max is None:
        t_max = 1e12 * max(1.0, rho * rho)
    u0, u1 = math.log(t_min), math.log(t_max)
    count = max(1, int(math.ceil(u1 - u0)))
    edges = np.linspace(u0, u1, count + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    u = mid[:, None] + half[:, None] * _GL_X[None, :]
    t = np.exp(u)
    values = np.array([heat_convolve(f, p, ti, rho, epsrel=epsrel) for ti in t.ravel()]).reshape(t.shape)
    p_lo = heat_convolve(f, p, t_min, rho, epsrel=epsrel)
    p_hi = heat_convolve(f, p, t_max, rho, epsrel=epsrel)
    p_prev = heat_convolve(f, p, t_max / math.e, rho, epsrel=epsrel)
    kappa = math.log(p_prev / p_hi) if p_hi > 0 and p_prev > 0 else math.inf
    return TimeProfile(p.n, rho, edges, t, values, p_lo, p_hi, kappa)


def subordinated_potential(f: RadialProfile, p: Params, rho: float, profile=None) -> float:
    """``Gamma(s/2)^-1 int_0^inf t^(s/2-1) (P_t * f)(rho) dt``."""
    prof = profile if profile is not None else time_profile(f, p, rho)
    return prof.total(0.5 * p.s) / gamma_fn(0.5 * p.s)


def subordination_check(f: RadialProfile, p: Params, rho: float, *, reference=None,
                        profile=None) -> float:
    """Relative gap between the heat-semigroup representation and ``reference``.

    ``reference`` defaults to the direct singular quadrature of ``I_s f``.
    """
    if reference is None:
        reference = riesz_potential(f, p, rho)
    value = subordinated_potential(f, p, rho, profile)
    return abs(value - reference) / abs(reference)


def averaged_maximal(f: RadialProfile, p: Params, rho: float, profile=None, *, full_output=False):
    """``M^0 f(rho) = sup_r r^-1 int_0^r (P_t * f)(rho) dt``.

    The running average is scanned at every sample time and refined by
    golden section in ``log r``; the ``r -> 0`` candidate is ``P_{t_lo} f``.
    """
    prof = profile if profile is not None else time_profile(f, p, rho)

    def avg(log_r):
        r = math.exp(log_r)
        return prof.upto(1.0, r) / r

    grid = np.concatenate([prof.edges, np.log(prof.t).ravel()])
    grid.sort()
    vals = np.array([avg(x) for x in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    x_best, best = golden_max(avg, lo, hi, xtol=1e-12)
    if vals[i] > best:
        x_best, best = grid[i], vals[i]
    if full_output:
        return float(best), math.exp(x_best)
    return float(best)


# split bound --------------------------------------------------------------------
def _a3_coefficients(p: Params):
    # J1 <= a R^(s/2) M0,  J2 <= b R^((s-n)/2) ||f||_1
    n, s = p.n, p.s
    a = 2.0 / math.expm1(0.5 * s * math.log(2.0))
    b = (2.0 / (n - s)) * (4.0 * math.pi) ** (-0.5 * n)
    return a, b


def envelope_a3(p: Params, R: float, m0: float, l1: float) -> float:
    """``Gamma(s/2)^-1 (a R^(s/2) M0 + b R^((s-n)/2) ||f||_1)``, a bound for ``I_s f``."""
    a, b = _a3_coefficients(p)
    return (a * R ** (0.5 * p.s) * m0 + b * R ** (0.5 * (p.s - p.n)) * l1) / gamma_fn(0.5 * p.s)


def _optimal_split(p: Params, m0: float, l1: float) -> float:
    # first-order condition: R^(n/2) = b (n-s) ||f|| / (a s M0)
    a, b = _a3_coefficients(p)
    return (b * (p.n - p.s) * l1 / (a * p.s * m0)) ** (2.0 / p.n)


def tau_minimized(p: Params) -> float:
    """``min_R`` of the split envelope with ``M0 = ||f||_1 = 1``: the best constant of the route."""
    _require_dyadic(p)
    return envelope_a3(p, _optimal_split(p, 1.0, 1.0), 1.0, 1.0)


def _require_dyadic(p):
    if not p.s < 2:
        raise DomainError("the dyadic bound on the short-time piece needs s < 2")


@dataclass
class HeatSplit:
    """Short/long time pieces of ``Gamma(s/2) I_s f`` at split time ``R`` and their majorants."""

    R: float
    J1: float
    J2: float
    J1_majorant: float
    J2_majorant: float
    bound_A3: float
    pointwise_A4: float
    tau_printed: float
    tau_minimized: float
    M0: float
    l1: float
    violations: List[str]

    @property
    def holds(self):
        return not self.violations


def split_bound(f: RadialProfile, p: Params, rho: float, R: float, profile=None, *,
                l1: Optional[float] = None, m0: Optional[float] = None, rtol=1e-9) -> HeatSplit:
    """Split at time ``R`` and compare each piece with its analytic majorant."""
    _require_dyadic(p)
    if not R > 0:
        raise DomainError("split time must be positive")
    prof = profile if profile is not None else time_profile(f, p, rho)
    a_exp = 0.5 * p.s
    j1 = prof.upto(a_exp, R)
    j2 = prof.total(a_exp) - j1
    l1 = l1_norm(f, p) if l1 is None else l1
    m0 = averaged_maximal(f, p, rho, prof) if m0 is None else m0
    a, b = _a3_coefficients(p)
    maj1 = a * R ** a_exp * m0
    maj2 = b * R ** (0.5 * (p.s - p.n)) * l1
    bound = envelope_a3(p, R, m0, l1)
    t_min = tau_minimized(p)
    a4 = t_min * m0 ** p.p * l1 ** (p.s / p.n)
    violations = []
    if j1 > maj1 * (1 + rtol):
        violations.append("short-time piece exceeds its majorant")
    if j2 > maj2 * (1 + rtol):
        violations.append("long-time piece exceeds its majorant")
    potential = (j1 + j2) / gamma_fn(a_exp)
    if potential > bound * (1 + rtol):
        violations.append("split envelope below the potential")
    if potential > a4 * (1 + rtol):
        violations.append("optimized pointwise bound below the potential")
    return HeatSplit(float(R), j1, j2, maj1, maj2, bound, a4, tau_constant(p), t_min, m0, l1,
                     violations)


def dyadic_j1(f: RadialProfile, p: Params, rho: float, R: float, *, t_min=_T_MIN,
              epsrel=1e-11) -> float:
    """``int_0^R t^(s/2-1) P_t f dt`` summed over dyadic pieces ``[2^-i R, 2^(1-i) R]``.

    Each piece is integrated adaptively in ``t`` with fresh convolutions, so
    the result is independent of the sampled time profile.
    """
    a_exp = 0.5 * p.s

    def integrand(t):
        return np.array([ti ** (a_exp - 1) * heat_convolve(f, p, ti, rho, epsrel=epsrel) for ti in t])

    total = 0.0
    hi = float(R)
    while hi / 2.0 >= t_min:
        lo = hi / 2.0
        total += integrate(integrand, lo, hi, epsrel=epsrel)
        hi = lo
    # below the last piece P_t f is frozen at its value there
    total += heat_convolve(f, p, hi, rho, epsrel=epsrel) * hi ** a_exp / a_exp
    return total


@dataclass
class TauRecord:
    """Both sides of ``I_s f <= tau (M0 f)^((n-s)/n) ||f||_1^(s/n)`` for two values of ``tau``."""

    rho: float
    potential: float
    M0: float
    l1: float
    tau_printed: float
    tau_minimized: float
    rhs_printed: float
    rhs_minimized: float

    @property
    def holds_printed(self):
        return self.potential <= self.rhs_printed * (1 + 1e-9)

    @property
    def holds_minimized(self):
        return self.potential <= self.rhs_minimized * (1 + 1e-9)


def pointwise_tau_bound(f: RadialProfile, p: Params, rho: float, profile=None) -> TauRecord:
    _require_dyadic(p)
    prof = profile if profile is not None else time_profile(f, p, rho)
    pot = riesz_potential(f, p, rho)
    m0 = averaged_maximal(f, p, rho, prof)
    l1 = l1_norm(f, p)
    scale = m0 ** p.p * l1 ** (p.s / p.n)
    tp, tm = tau_constant(p), tau_minimized(p)
    return TauRecord(float(rho), pot, m0, l1, tp, tm, tp * scale, tm * scale)


# constants comparison ----------------------------------------------------------
@dataclass
class ComparisonRow:
    n: int
    s: float
    tau_printed: float
    tau_minimized: float
    upper_bound: float
    ratio: float
    majorant: float
    majorant_ratio: float
    printed_over_minimized: float
    in_window: bool


COMPARISON_COLUMNS = ("n", "s", "tau_printed", "tau_minimized", "upper_bound", "ratio")
RATIO_WINDOW = (0.05, 20.0)


def asymptotic_comparison(n_grid, s_grid) -> List[ComparisonRow]:
    """``tau_s`` and its elementary majorant against ``gamma_s v_n^((n-s)/n) n/s`` per cell."""
    rows = []
    for n in n_grid:
        for s in s_grid:
            p = Params(int(n), float(s))
            tp, tm, up = tau_constant(p), tau_minimized(p), upper_bound(p)
            maj = tau_majorant(p)
            ratios = (tp / up, maj / up)
            ok = all(math.isfinite(r) and RATIO_WINDOW[0] <= r <= RATIO_WINDOW[1] for r in ratios)
            rows.append(ComparisonRow(p.n, p.s, tp, tm, up, tp / up, maj, maj / up, tp / tm, ok))
    return rows


def log_majorization_holds(s_grid) -> bool:
    """``2^(s/2) - 1 > (ln 2 / 2) s`` on every grid point."""
    s = np.asarray(s_grid, dtype=float)
    return bool(np.all(np.expm1(0.5 * s * math.log(2.0)) > 0.5 * math.log(2.0) * s))


def averaged_maximal_weak11(f: RadialProfile, p: Params, radii) -> np.ndarray:
    """``v_n rho^n M0 f(rho) / ||f||_1`` at each radius.

    For radially decreasing ``f`` the function ``M0 f`` is radially decreasing,
    so levels just below ``M0 f(rho)`` give ``lambda |{M0 f > lambda}|`` equal
    to these ratios times ``||f||_1``; the weak (1,1) bound says they stay <= 1.
    """
    l1 = l1_norm(f, p)
    radii = np.asarray(radii, dtype=float)
    m0 = np.array([averaged_maximal(f, p, r) for r in radii])
    return unit_ball_volume(p.n) * radii ** p.n * m0 / l1
