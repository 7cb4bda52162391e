"""Radial profiles and their reductions to one-dimensional integrals.

A radial function ``f(x) = h(|x|)`` on ``R^n`` is stored as a
:class:`RadialProfile`.  Everything else in the package (Riesz potentials,
ball masses, fractional maximal functions, heat convolutions) integrates
such profiles against angular averages of the relevant kernel.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq
from scipy.special import betainc, gamma, gammaln, hyp2f1

from ._quadrature import decade_points, golden_max, integrate, power_map
from .constants import Params, riesz_constant, sphere_area, unit_ball_volume
from .errors import DomainError, InfeasibleWitnessError

__all__ = [
    "PowerTail", "RadialProfile", "WitnessConfig", "indicator_ball",
    "power_profile", "gaussian_profile", "l1_norm", "mass_within",
    "riesz_kernel_radial", "riesz_potential", "ball_mass",
    "fractional_maximal", "dirac_maximal", "resolve_witness_radius",
    "pointwise_lower_witness",
]

# Analytic profiles are integrated this far past their last node before the
# tail model takes over.
_FUNC_REACH = 1e3
_RADIUS_SCAN = np.geomspace(1e-6, 1e6, 97)


@dataclass(frozen=True)
class PowerTail:
    """Tail model ``h(rho) ~ amplitude * rho**(-exponent)``."""

    amplitude: float
    exponent: float

    def __call__(self, rho):
        return self.amplitude * np.asarray(rho, dtype=float) ** (-self.exponent)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Radial function ``h`` on ``[0, inf)``.

    Between nodes ``h`` is the monotone piecewise-cubic (PCHIP) interpolant of
    ``values``; below the first node it is held at ``values[0]``; past the last
    node it follows ``tail`` if given and vanishes otherwise.  ``cutoff``
    forces ``h = 0`` for ``rho >= cutoff``.

    ``func``, when given, is a vectorized exact evaluator used in place of
    the interpolant everywhere; ``nodes``/``values`` are then samples of it
    kept for serialization and scale information.
    """

    nodes: np.ndarray
    values: np.ndarray
    monotone_decreasing: bool = False
    tail: Optional[PowerTail] = None
    cutoff: Optional[float] = None
    func: Optional[Callable] = None
    label: str = ""
    _interp: object = field(default=None, init=False, repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if nodes.size < 2 or nodes.size != values.size:
            raise DomainError("a profile needs at least two nodes and one value per node")
        if nodes[0] < 0 or np.any(np.diff(nodes) <= 0):
            raise DomainError("nodes must be non-negative and strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DomainError("profile values must be finite and non-negative")
        if self.monotone_decreasing and np.any(np.diff(values) > 0):
            raise DomainError("values increase although the profile is flagged decreasing")
        if self.tail is not None and self.cutoff is not None:
            raise DomainError("tail model and cutoff are mutually exclusive")
        if self.tail is not None and not (self.tail.amplitude >= 0 and self.tail.exponent > 0):
            raise DomainError("tail amplitude must be >= 0 and exponent > 0")
        if self.cutoff is not None and not self.cutoff > 0:
            raise DomainError("cutoff must be positive")
        if self.func is not None and self.tail is None and self.cutoff is None:
            raise DomainError("an analytic profile needs a tail model or a cutoff")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if self.cutoff is not None:
            object.__setattr__(self, "cutoff", float(self.cutoff))
        if self.func is None:
            interp = PchipInterpolator(nodes, values, extrapolate=False)
            object.__setattr__(self, "_interp", interp)
            if self.monotone_decreasing:
                probe = np.linspace(nodes[0], nodes[-1], 8 * nodes.size)
                if np.any(np.diff(interp(probe)) > 1e-12 * max(values[0], 1e-300)):
                    raise DomainError("interpolant of a decreasing profile is not decreasing")

    # evaluation -----------------------------------------------------------
    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.func is not None:
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                out = np.asarray(self.func(rho), dtype=float) * np.ones_like(rho)
        else:
            out = np.zeros_like(rho)
            below = rho < self.nodes[0]
            inside = (rho >= self.nodes[0]) & (rho <= self.nodes[-1])
            out[below] = self.values[0]
            out[inside] = self._interp(rho[inside])
            if self.tail is not None:
                above = rho > self.nodes[-1]
                out[above] = self.tail(rho[above])
        if self.cutoff is not None:
            out = np.where(rho < self.cutoff, out, 0.0)
        return out

    @property
    def reach(self):
        """Radius past which only the tail model (or nothing) remains."""
        if self.cutoff is not None:
            return self.cutoff
        if self.func is not None:
            return _FUNC_REACH * self.nodes[-1]
        return self.nodes[-1]

    @property
    def has_tail(self):
        return self.cutoff is None and self.tail is not None

    def breakpoints(self):
        pts = []
        if self.cutoff is not None:
            pts.append(self.cutoff)
        if self.func is None:
            if self.nodes[0] > 0:
                pts.append(self.nodes[0])
            pts.append(self.nodes[-1])
        return np.asarray(pts, dtype=float)

    def validate_for(self, n):
        """Reject tails whose L1 integral diverges in dimension ``n``."""
        if self.has_tail and not self.tail.exponent > n:
            raise DomainError(
                f"tail exponent {self.tail.exponent} <= n={n}: profile is not integrable")
        return self

    # transformations ------------------------------------------------------
    def scaled(self, c):
        """The profile ``c * h``."""
        c = float(c)
        func = None if self.func is None else (lambda r, f=self.func: c * f(r))
        tail = None if self.tail is None else PowerTail(c * self.tail.amplitude, self.tail.exponent)
        return RadialProfile(self.nodes, c * self.values, self.monotone_decreasing,
                             tail, self.cutoff, func, self.label)

    def dilated(self, a):
        """The profile ``rho -> h(a * rho)``."""
        a = float(a)
        if not a > 0:
            raise DomainError("dilation factor must be positive")
        func = None if self.func is None else (lambda r, f=self.func: f(a * r))
        tail = None
        if self.tail is not None:
            tail = PowerTail(self.tail.amplitude * a ** (-self.tail.exponent), self.tail.exponent)
        cutoff = None if self.cutoff is None else self.cutoff / a
        return RadialProfile(self.nodes / a, self.values, self.monotone_decreasing,
                             tail, cutoff, func, self.label)

    # serialization --------------------------------------------------------
    def to_dict(self):
        tail = None if self.tail is None else {"A": self.tail.amplitude, "beta": self.tail.exponent}
        return {"nodes": self.nodes.tolist(), "values": self.values.tolist(),
                "monotone": bool(self.monotone_decreasing), "tail": tail,
                "cutoff": self.cutoff}

    @classmethod
    def from_dict(cls, data):
        missing = {"nodes", "values"} - set(data)
        if missing:
            raise DomainError(f"profile is missing field(s): {sorted(missing)}")
        tail = data.get("tail")
        if tail is not None:
            tail = PowerTail(float(tail["A"]), float(tail["beta"]))
        return cls(data["nodes"], data["values"], bool(data.get("monotone", False)),
                   tail, data.get("cutoff"))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_function(cls, func, nodes, *, monotone_decreasing=False, tail=None,
                      cutoff=None, label=""):
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(func(nodes), dtype=float)
        if cutoff is not None:
            values = np.where(nodes < cutoff, values, 0.0)
        return cls(nodes, values, monotone_decreasing, tail, cutoff, func, label)


@dataclass(frozen=True)
class WitnessConfig:
    """Mass deficit ``epsilon``, ball dilation ``l`` and grand-norm exponent ``r``."""

    epsilon: float
    l: float
    r: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError("epsilon must lie in [0, 1)")
        if not (math.isfinite(self.l) and self.l > 0):
            raise DomainError("l must be finite and positive")
        if not self.r > 0:
            raise DomainError("r must be positive")

    def check(self, p: Params):
        if not self.r < p.critical_r:
            raise DomainError(f"r must be below n/(n-s) = {p.critical_r}")
        return self


# standard profiles -----------------------------------------------------------
def indicator_ball(radius=1.0, height=1.0):
    """``height`` times the indicator of the open ball of the given radius."""
    return RadialProfile([0.0, radius], [height, height], True, cutoff=radius,
                         label="indicator_ball")


def power_profile(exponent, rho_min=1e-3, rho_max=1e3):
    """Pure power ``rho**(-exponent)`` on all of ``(0, inf)`` (not integrable)."""
    nodes = np.geomspace(rho_min, rho_max, 61)
    return RadialProfile.from_function(
        lambda r: np.asarray(r, dtype=float) ** (-exponent), nodes,
        monotone_decreasing=True, tail=PowerTail(1.0, exponent), label="power")


def gaussian_profile(width=1.0):
    """``exp(-(rho/width)**2)``, cut off where it underflows below 1e-300."""
    cutoff = 26.3 * width
    nodes = np.concatenate([[0.0], np.geomspace(1e-3 * width, cutoff, 60)])
    return RadialProfile.from_function(
        lambda r: np.exp(-(np.asarray(r, dtype=float) / width) ** 2), nodes,
        monotone_decreasing=True, cutoff=cutoff, label="gaussian")


# radial integrals ------------------------------------------------------------
def _integrate_radial(fun, lo, hi, extra_points=(), epsrel=1e-11):
    """Integrate ``fun`` over ``[lo, hi]``, resolving decades and a singular origin."""
    if hi <= lo:
        return 0.0
    pts = np.concatenate([decade_points(lo, hi), np.asarray(extra_points, dtype=float)])
    pts = np.unique(pts[(pts > lo) & (pts < hi)])
    if lo > 0:
        return integrate(fun, lo, hi, points=pts, epsrel=epsrel)
    # Map the first panel so an integrable power singularity at 0 is smoothed.
    first = pts[0] if pts.size else hi
    x_of_u, dx_du, _ = power_map(0.0, first, 3.0, toward="lo")
    head = integrate(lambda u: fun(x_of_u(u)) * dx_du(u), 0.0, 1.0, epsrel=epsrel)
    return head + (integrate(fun, first, hi, points=pts, epsrel=epsrel) if first < hi else 0.0)


def mass_within(f: RadialProfile, n: int, radius: float) -> float:
    """``int_{|x| < radius} f(x) dx``."""
    radius = float(radius)
    if radius <= 0:
        return 0.0
    omega = sphere_area(n)

    def integrand(x):
        return f(x) * x ** (n - 1)

    reach = f.reach
    core = _integrate_radial(integrand, 0.0, min(radius, reach), f.breakpoints())
    if radius > reach and f.has_tail:
        A, beta = f.tail.amplitude, f.tail.exponent
        if beta == n:
            core += A * math.log(radius / reach)
        else:
            core += A * (reach ** (n - beta) - radius ** (n - beta)) / (beta - n)
    return float(omega * core)


def l1_norm(f: RadialProfile, p: Params) -> float:
    """``||f||_1 = |S^{n-1}| int_0^inf h(rho) rho^(n-1) d rho``, tail included."""
    n = p.n if isinstance(p, Params) else int(p)
    f.validate_for(n)
    total = mass_within(f, n, f.reach)
    if f.has_tail:
        A, beta = f.tail.amplitude, f.tail.exponent
        total += sphere_area(n) * A * f.reach ** (n - beta) / (beta - n)
    return float(total)


# Riesz kernel ----------------------------------------------------------------
def riesz_kernel_radial(p: Params, rho, sigma, method="hypergeometric"):
    """Angular average ``K(rho, sigma) = int_{S^{n-1}} |rho e_1 - sigma w|^(s-n) dw``.

    The default evaluates the Gauss hypergeometric closed form
    ``|S^{n-1}| R^(s-n) 2F1((n-s)/2, 1-s/2; n/2; (r/R)^2)`` with
    ``R = max(rho, sigma)``, ``r = min(rho, sigma)``.  ``method="angular"``
    integrates over the polar angle instead (scalar inputs only).
    """
    n, s = p.n, p.s
    rho_a = np.asarray(rho, dtype=float)
    sig_a = np.asarray(sigma, dtype=float)
    if np.any((rho_a == 0) & (sig_a == 0)):
        raise DomainError("kernel is singular at rho = sigma = 0")
    if np.any(rho_a < 0) or np.any(sig_a < 0):
        raise DomainError("radii must be non-negative")
    if method == "angular":
        if rho_a.ndim or sig_a.ndim:
            return np.vectorize(lambda a, b: _kernel_angular(p, float(a), float(b)))(rho_a, sig_a)
        return _kernel_angular(p, float(rho_a), float(sig_a))
    if method != "hypergeometric":
        raise ValueError(f"unknown method {method!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        if n == 1:
            out = np.abs(rho_a - sig_a) ** (s - 1) + (rho_a + sig_a) ** (s - 1)
        else:
            big = np.maximum(rho_a, sig_a)
            small = np.minimum(rho_a, sig_a)
            x2 = (small / big) ** 2
            out = sphere_area(n) * big ** (s - n) * hyp2f1(0.5 * (n - s), 1 - 0.5 * s, 0.5 * n, x2)
    return out if out.ndim else float(out)


def _kernel_weight(p: Params, rho, sig):
    """``K(rho, sigma) sigma^(n-1)`` assembled in logs so large ``n`` cannot overflow."""
    n, s = p.n, p.s
    sig = np.asarray(sig, dtype=float)
    if n == 1:
        return riesz_kernel_radial(p, rho, sig)
    big = np.maximum(rho, sig)
    small = np.minimum(rho, sig)
    with np.errstate(divide="ignore"):
        log_w = (s - n) * np.log(big) + (n - 1) * np.log(sig)
    x2 = (small / big) ** 2
    return sphere_area(n) * np.exp(log_w) * hyp2f1(0.5 * (n - s), 1 - 0.5 * s, 0.5 * n, x2)


def _kernel_angular(p: Params, rho: float, sigma: float) -> float:
    n, s = p.n, p.s
    if n == 1:
        return abs(rho - sigma) ** (s - 1) + (rho + sigma) ** (s - 1)
    delta2 = (rho - sigma) ** 2
    four_rs = 4.0 * rho * sigma

    def integrand(theta):
        d2 = delta2 + four_rs * np.sin(0.5 * theta) ** 2
        return d2 ** (-0.5 * (n - s)) * np.sin(theta) ** (n - 2)

    width = abs(rho - sigma) / math.sqrt(rho * sigma) if rho * sigma > 0 else math.pi
    pts = width * 10.0 ** np.arange(-1, 8)
    pts = pts[pts < math.pi]
    first = pts[0] if pts.size else math.pi
    x_of_u, dx_du, _ = power_map(0.0, first, 4.0, toward="lo")
    head = integrate(lambda u: integrand(x_of_u(u)) * dx_du(u), 0.0, 1.0, epsrel=1e-13)
    rest = integrate(integrand, first, math.pi, points=pts, epsrel=1e-13) if first < math.pi else 0.0
    return sphere_area(n - 1) * (head + rest)


def _singular_power(s):
    # Node clustering exponent: |rho - sigma|^(s-1) becomes u^(k s - 1) >= u^1.
    return max(2.0, 2.0 / s)


def riesz_potential(f: RadialProfile, p: Params, rho: float, *, epsrel=1e-10) -> float:
    """``I_s f`` at radius ``rho``: ``gamma_s int_0^inf K(rho, sigma) h(sigma) sigma^(n-1) d sigma``.

    The sigma-integral is split at ``sigma = rho``; the two adjacent pieces are
    mapped with a power clustering that absorbs the weak diagonal singularity.
    Past the profile's reach the tail model is integrated analytically using
    the first two terms of the kernel's far-field expansion.
    """
    n, s = p.n, p.s
    rho = float(rho)
    if rho < 0:
        raise DomainError("radius must be non-negative")
    if f.has_tail and not f.tail.exponent > s:
        raise DomainError("tail decays too slowly for the Riesz potential to converge")
    k = _singular_power(s)
    breaks = f.breakpoints()
    top = f.reach
    if f.has_tail:
        top = max(top, 1e3 * rho, 1.0)

    def integrand(sig):
        return _kernel_weight(p, rho, sig) * f(sig)

    total = 0.0
    if rho == 0.0:
        omega = sphere_area(n)
        first = min(1.0, top)
        x_of_u, _, u_of_x = power_map(0.0, first, k, toward="lo")
        inner = breaks[(breaks > 0) & (breaks < first)]
        pts = np.concatenate([u_of_x(inner), u_of_x(decade_points(0.0, first))])
        # sigma^(s-1) d sigma = first^s k u^(k s - 1) du under sigma = first u^k
        total += integrate(lambda u: omega * f(x_of_u(u)) * first ** s * k * u ** (k * s - 1),
                           0.0, 1.0, points=pts, epsrel=epsrel)
        if first < top:
            total += _integrate_radial(lambda x: omega * f(x) * x ** (s - 1), first, top,
                                       breaks, epsrel=epsrel)
    else:
        total += _integrate_radial(integrand, 0.0, min(0.5 * rho, top), breaks, epsrel=epsrel)
        for lo, hi, toward in ((0.5 * rho, rho, "hi"), (rho, 2.0 * rho, "lo")):
            hi_c = min(hi, top)
            if hi_c <= lo:
                continue
            if toward == "hi" and hi_c < rho:
                total += _integrate_radial(integrand, lo, hi_c, breaks, epsrel=epsrel)
                continue
            # a sliver next to a cutoff must not chase its own roundoff floor
            total += _diagonal_piece(f, p, rho, lo, hi_c, k, toward, breaks, epsrel,
                                     epsabs=0.1 * epsrel * abs(total))
        if 2.0 * rho < top:
            total += _integrate_radial(integrand, 2.0 * rho, top, breaks, epsrel=epsrel)
    if f.has_tail:
        total += _tail_remainder(p, f.tail, rho, top)
    return float(riesz_constant(p) * total)


def _diagonal_piece(f, p, rho, lo, hi, k, toward, breaks, epsrel, epsabs=1e-300):
    """Integrate ``K sigma^(n-1) h`` over a piece touching ``sigma = rho``.

    Under ``sigma = rho -/+ L u^k`` the gap to the diagonal is ``L u^k``
    exactly, which is passed to the kernel instead of being recovered from
    the rounded ``sigma``.
    """
    s = p.s
    length = hi - lo
    x_of_u, dx_du, u_of_x = power_map(lo, hi, k, toward=toward)
    inner = breaks[(breaks > lo) & (breaks < hi)]
    gap_decades = 10.0 ** (-np.arange(1, 18) / k)
    pts = np.concatenate([u_of_x(inner), u_of_x(decade_points(lo, hi)), gap_decades])
    log_len = math.log(length)
    # Nodes that round onto rho take the one-sided neighbour so jumps at rho keep their side.
    side = np.nextafter(rho, -np.inf if toward == "hi" else np.inf)

    def mapped(u):
        sig = x_of_u(u)
        sig = np.where(sig == rho, side, sig)
        with np.errstate(divide="ignore"):
            log_u = np.log(u)
        log_gap = log_len + k * log_u
        gap = np.exp(log_gap)
        regular, singular = _kernel_parts(p, rho, sig, gap)
        # gap^(s-1) d sigma/du, combined in logs to survive u^k underflow
        log_jac = math.log(length * k) + (k - 1) * log_u
        sing_term = singular * np.exp((s - 1) * log_gap + log_jac) if singular is not None else 0.0
        reg_term = np.where(gap > 0, regular, 0.0) * dx_du(u)
        return f(sig) * (np.nan_to_num(reg_term, nan=0.0, posinf=0.0) + sing_term)

    return integrate(mapped, 0.0, 1.0, points=pts, epsrel=epsrel, epsabs=max(epsabs, 1e-300))


# Below this order the diagonal singularity puts visible mass inside one ulp of
# sigma = rho, so the kernel is split into regular + gap^(s-1) parts there.
_SPLIT_BELOW = 0.99
_SPLIT_GAP = 0.25


def _kernel_parts(p: Params, rho, sig, gap):
    """``K sigma^(n-1) = regular + singular * gap^(s-1)`` for ``gap = |rho - sigma|``.

    ``singular`` is ``None`` when no split is needed (``s`` near or above 1).
    """
    n, s = p.n, p.s
    sig = np.asarray(sig, dtype=float)
    if n == 1:
        with np.errstate(divide="ignore"):
            regular = (rho + sig) ** (s - 1)
        if s < _SPLIT_BELOW:
            return regular, np.ones_like(sig)
        with np.errstate(divide="ignore"):
            return regular + gap ** (s - 1), None
    big = np.maximum(rho, sig)
    with np.errstate(divide="ignore"):
        log_w = (s - n) * np.log(big) + (n - 1) * np.log(sig)
    omega_w = sphere_area(n) * np.exp(log_w)
    if s >= _SPLIT_BELOW:
        with np.errstate(divide="ignore", invalid="ignore"):
            return omega_w * _hyp_direct(p, big, np.minimum(rho, sig)), None
    w = gap * (2.0 * big - gap) / big ** 2
    near = w < _SPLIT_GAP
    a, b, c = 0.5 * (n - s), 1 - 0.5 * s, 0.5 * n
    delta = s - 1.0
    ca, cb = _connection_coefficients(n, s)
    regular = np.where(near, ca * hyp2f1(a, b, 1 - delta, np.where(near, w, 0.0)),
                       _hyp_direct(p, big, np.minimum(rho, sig)))
    # w^delta = gap^delta ((2 big - gap)/big^2)^delta
    scale = ((2.0 * big - gap) / big ** 2) ** delta
    singular = np.where(near, cb * scale * hyp2f1(c - a, c - b, 1 + delta, np.where(near, w, 0.0)), 0.0)
    return omega_w * regular, omega_w * singular


def _hyp_direct(p, big, small):
    n, s = p.n, p.s
    return hyp2f1(0.5 * (n - s), 1 - 0.5 * s, 0.5 * n, (small / big) ** 2)


def _connection_coefficients(n, s):
    # z -> 1 - z connection for 2F1((n-s)/2, 1-s/2; n/2; z), c - a - b = s - 1.
    delta = s - 1.0
    lg_c = gammaln(0.5 * n)
    first = math.exp(lg_c - gammaln(0.5 * s) - gammaln(0.5 * (n + s) - 1)) * gamma(delta)
    second = math.exp(lg_c + gammaln(-delta) - gammaln(0.5 * (n - s)) - gammaln(1 - 0.5 * s))
    return first, second


def _tail_remainder(p: Params, tail: PowerTail, rho: float, top: float) -> float:
    n, s = p.n, p.s
    A, beta = tail.amplitude, tail.exponent
    c1 = (0.5 * (n - s)) * (1 - 0.5 * s) / (0.5 * n)
    lead = top ** (s - beta) / (beta - s)
    corr = c1 * rho ** 2 * top ** (s - beta - 2) / (beta - s + 2)
    return sphere_area(n) * A * (lead + corr)


# balls and maximal functions -------------------------------------------------
def _cap_fraction(n, rho0, r, sigma):
    """Fraction of the sphere of radius ``sigma`` inside ``B(x, r)``, ``|x| = rho0``.

    With ``mu`` the cosine of the cap angle, ``(1 - mu)/2`` and ``(1 + mu)/2``
    are formed from factored differences so that thin shells keep their digits.
    """
    sigma = np.asarray(sigma, dtype=float)
    denom = 4.0 * rho0 * sigma
    one_minus = (r - rho0 + sigma) * (r + rho0 - sigma) / denom
    one_plus = (rho0 + sigma - r) * (rho0 + sigma + r) / denom
    if n == 1:
        return 0.5 * (one_minus > 0) + 0.5 * (one_plus < 0)
    x = np.clip(one_minus, 0.0, 1.0)
    y = np.clip(one_plus, 0.0, 1.0)
    half = 0.5 * (n - 1)
    return np.where(x <= 0.5, betainc(half, half, x), 1.0 - betainc(half, half, y))


def ball_mass(f: RadialProfile, p: Params, center_radius: float, r: float) -> float:
    """``int_{B(x, r)} f`` for any ``x`` with ``|x| = center_radius``."""
    n = p.n
    rho0 = float(center_radius)
    r = float(r)
    if rho0 < 0 or r < 0:
        raise DomainError("radii must be non-negative")
    if r == 0.0:
        return 0.0
    if rho0 == 0.0:
        return mass_within(f, n, r)
    inner = mass_within(f, n, max(0.0, r - rho0))
    lo = abs(rho0 - r)
    hi = rho0 + r
    if f.cutoff is not None:
        hi = min(hi, f.cutoff)
    if hi <= lo:
        return inner

    def integrand(sig):
        return f(sig) * sig ** (n - 1) * _cap_fraction(n, rho0, r, sig)

    shell = integrate(integrand, lo, hi,
                      points=np.concatenate([f.breakpoints(), decade_points(lo, hi, 4)]),
                      epsrel=1e-10)
    return float(inner + sphere_area(n) * shell)


def fractional_maximal(f: RadialProfile, p: Params, rho: float, *, full_output=False):
    """Centered fractional maximal function ``M_s f`` at radius ``rho``.

    Scans ball radii log-uniformly over ``[1e-6, 1e6] * (1 + rho)`` and
    refines the best bracket by golden-section search in ``log r``.
    """
    n, s = p.n, p.s
    v = unit_ball_volume(n)

    def ratio(log_r):
        r = math.exp(log_r)
        return (v * r ** n) ** (s / n - 1.0) * ball_mass(f, p, rho, r)

    grid = np.log(_RADIUS_SCAN * (1.0 + rho))
    vals = np.array([ratio(g) for g in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    log_r, best = golden_max(ratio, lo, hi, xtol=1e-9)
    if vals[i] > best:
        log_r, best = grid[i], vals[i]
    if full_output:
        return float(best), math.exp(log_r)
    return float(best)


def dirac_maximal(p: Params, rho: float) -> float:
    """Centered maximal function of a unit point mass at the origin, ``1/(v_n rho^n)``."""
    if not rho > 0:
        raise DomainError("the point-mass maximal function is infinite at the origin")
    return 1.0 / (unit_ball_volume(p.n) * rho ** p.n)


# mass-deficit witness ----------------------------------------------------------
def resolve_witness_radius(f: RadialProfile, cfg: WitnessConfig, p: Params) -> float:
    """Radius ``R`` with ``int_{B_R} f = 1 - epsilon``."""
    target = 1.0 - cfg.epsilon
    total = l1_norm(f, p)
    if total < target * (1 - 1e-12):
        raise InfeasibleWitnessError(
            f"total mass {total:.6g} is below the required 1 - epsilon = {target:.6g}")
    if cfg.epsilon == 0.0 or abs(total - target) <= 1e-12 * total:
        if f.cutoff is None:
            raise InfeasibleWitnessError("full mass is only reached at infinity")
        return f.cutoff

    def deficit(R):
        return mass_within(f, p.n, R) - target

    hi = max(f.nodes[-1], 1.0)
    while deficit(hi) < 0:
        hi *= 4.0
        if hi > 1e300:
            raise InfeasibleWitnessError("no finite radius carries the requested mass")
    lo = hi
    while deficit(lo) > 0:
        lo *= 0.25
    return brentq(deficit, lo, hi, xtol=1e-14, rtol=1e-13)


def pointwise_lower_witness(f: RadialProfile, cfg: WitnessConfig, p: Params, rho: float) -> float:
    """``(1 - epsilon) (rho + R)^(s-n)``: a floor for ``int_{B_R} f(y) |x-y|^(s-n) dy``."""
    R = resolve_witness_radius(f, cfg, p)
    return (1.0 - cfg.epsilon) * (rho + R) ** (p.s - p.n)
