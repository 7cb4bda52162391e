"""Closed-form constants, all evaluated through log-gamma.

Every gamma ratio is assembled in the log domain and exponentiated once, so
dimensions in the hundreds stay usable (``Gamma(n/2)`` alone overflows a
double near ``n = 343``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

from .errors import DomainError

__all__ = [
    "Params", "CompositionParams", "gamma_fn", "riesz_constant",
    "unit_ball_volume", "sphere_area", "extremal_constant",
    "composition_constant", "upper_bound", "lower_bound", "tau_constant",
    "tau_majorant", "sharp_floor", "grand_norm_factor", "in_lower_window",
]

LN2 = math.log(2.0)
LNPI = math.log(math.pi)


@dataclass(frozen=True)
class Params:
    """Dimension ``n`` and order ``s`` with ``0 < s < n``."""

    n: int
    s: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        s = float(self.s)
        if not math.isfinite(s) or not 0.0 < s < self.n:
            raise DomainError(f"order s must satisfy 0 < s < n={self.n}, got {self.s!r}")
        object.__setattr__(self, "s", s)

    @property
    def p(self):
        """Exponent ``(n - s)/n`` applied to level-set measures."""
        return (self.n - self.s) / self.n

    @property
    def critical_r(self):
        """Upper end ``n/(n-s)`` of the admissible grand-norm exponents."""
        return self.n / (self.n - self.s)

    def require_lower_window(self):
        """Raise unless ``n > 2`` and ``0 < s < (n-2)/4``."""
        if not in_lower_window(self.n, self.s):
            raise DomainError(
                f"(n={self.n}, s={self.s}) outside the window n > 2, 0 < s < (n-2)/4")
        return self


@dataclass(frozen=True)
class CompositionParams:
    """Params plus the exponent ``alpha`` of the kernel ``|y|**(alpha-n)``."""

    base: Params
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        n, s = self.base.n, self.base.s
        if not 0.0 < a < n:
            raise DomainError(f"alpha must satisfy 0 < alpha < n, got {a}")
        if not a + s < n:
            raise DomainError(f"alpha + s must be < n, got {a + s}")
        object.__setattr__(self, "alpha", a)


def in_lower_window(n, s):
    return n > 2 and 0.0 < s < (n - 2) / 4.0


def _lgamma(x):
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"gamma argument must be positive and finite, got {x!r}")
    return float(gammaln(x))


def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0``.

    ``lgamma`` screens for overflow; the value itself comes from the direct
    gamma, since ``exp(lgamma)`` loses ``|lgamma| * eps`` of relative accuracy.
    """
    lg = _lgamma(float(x))
    if lg > 709.0:
        raise OverflowError(f"Gamma({x}) overflows double precision")
    return math.gamma(float(x))


def unit_ball_volume(n: int) -> float:
    if n < 1:
        raise DomainError("dimension must be >= 1")
    return math.exp(0.5 * n * LNPI - _lgamma(0.5 * n + 1.0))


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in ``R^n`` (two points when n = 1)."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    return math.exp(LN2 + 0.5 * n * LNPI - _lgamma(0.5 * n))


def _log_riesz_constant(n, s):
    return -s * LN2 - 0.5 * n * LNPI + _lgamma(0.5 * (n - s)) - _lgamma(0.5 * s)


def riesz_constant(p: Params) -> float:
    """Normalisation of the Riesz kernel, ``2^-s pi^(-n/2) G((n-s)/2) / G(s/2)``."""
    return math.exp(_log_riesz_constant(p.n, p.s))


def extremal_constant(p: Params) -> float:
    """``pi^(n/2) 2^((s+n)/2) G(s/2) / G((s+n)/2)``, the L1 norm of the extremal profile."""
    n, s = p.n, p.s
    return math.exp(0.5 * n * LNPI + 0.5 * (s + n) * LN2
                    + _lgamma(0.5 * s) - _lgamma(0.5 * (s + n)))


def composition_constant(cp: CompositionParams) -> float:
    """Constant of the convolution ``|.|^(s-n) * |.|^(alpha-n) = C |.|^(s+alpha-n)``."""
    n, s, a = cp.base.n, cp.base.s, cp.alpha
    log_c = (0.5 * n * LNPI + _lgamma(0.5 * s) + _lgamma(0.5 * a)
             + _lgamma(0.5 * (n - s - a)) - _lgamma(0.5 * (n - s))
             - _lgamma(0.5 * (n - a)) - _lgamma(0.5 * (s + a)))
    return math.exp(log_c)


def _log_floor(n, s):
    # log of gamma_s * v_n^((n-s)/n)
    log_v = 0.5 * n * LNPI - _lgamma(0.5 * n + 1.0)
    return _log_riesz_constant(n, s) + (n - s) / n * log_v


def sharp_floor(p: Params) -> float:
    """``gamma_s v_n^((n-s)/n)``: the sharp constant of the reverse weak estimate."""
    return math.exp(_log_floor(p.n, p.s))


def upper_bound(p: Params) -> float:
    return math.exp(_log_floor(p.n, p.s) + math.log(p.n / p.s))


def lower_bound(p: Params) -> float:
    p.require_lower_window()
    n, s = p.n, p.s
    factor = (n - 2 - 4 * s) / (2 * s * (n - 2 - s))
    return math.exp(_log_floor(n, s) + math.log(factor))


def grand_norm_factor(p: Params, r: float) -> float:
    """``(n / (n - (n-s) r))^(1/r)`` for ``0 < r < n/(n-s)``."""
    n, s = p.n, p.s
    denom = n - (n - s) * r
    if not (r > 0 and denom > 0):
        raise DomainError(f"grand-norm exponent r must lie in (0, {n / (n - s)}), got {r}")
    return math.exp(math.log(n / denom) / r)


def tau_constant(p: Params) -> float:
    """Heat-semigroup constant ``tau_s`` (closed form, log domain)."""
    n, s = p.n, p.s
    log_tau = (LN2 - 0.5 * s * math.log(4 * math.pi)
               + (s - n) / n * math.log(math.expm1(0.5 * s * LN2))
               + math.log(n / (n - s)) - (s / n) * math.log(s) - _lgamma(0.5 * s))
    return math.exp(log_tau)


def tau_majorant(p: Params) -> float:
    """``(2/ln 2) (4 pi)^(s/2) n / ((n-s) G(s/2+1))``, an elementary majorant of ``tau_s``."""
    n, s = p.n, p.s
    return math.exp(math.log(2 / LN2) + 0.5 * s * math.log(4 * math.pi)
                    - _lgamma(0.5 * s + 1) + math.log(n / (n - s)))
