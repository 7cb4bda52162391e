"""Vectorized adaptive Gauss-Kronrod quadrature and 1-D search helpers.

The integrator evaluates the integrand on every pending panel in a single
call, so the integrand must accept a 1-D array of abscissae.  It may return
either an array of the same shape or an array of shape ``(m, k)`` for ``k``
simultaneous integrands; error control is then applied per component.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericAccuracyError

# Kronrod 15-point extension of the 7-point Gauss-Legendre rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes counted from either end.
GAUSS_WEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

DEFAULT_MAX_PANELS = 10_000


def integrate(func, a, b, *, points=(), epsrel=1e-10, epsabs=1e-300,
              max_panels=DEFAULT_MAX_PANELS, full_output=False):
    """Integrate ``func`` over the finite interval ``[a, b]``.

    ``points`` are interior breakpoints (kinks, jumps, scale changes).  The
    routine refines panels until the summed Kronrod-minus-Gauss estimate of
    every component is below ``max(epsabs, epsrel * |integral|)``.

    Returns the integral (float or array of ``k`` values).  With
    ``full_output`` also returns the error estimate and panel count.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate needs finite limits; map infinite ranges first")
    if b == a:
        out = 0.0
        return (out, 0.0, 0) if full_output else out
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    pts = np.asarray(points, dtype=float).ravel()
    pts = np.unique(pts[(pts > a) & (pts < b)])
    edges = np.concatenate([[a], pts, [b]])
    lo = edges[:-1]
    hi = edges[1:]

    kron, err = _evaluate_panels(func, lo, hi)
    while True:
        total = kron.sum(axis=0)
        total_err = err.sum(axis=0)
        tol = np.maximum(epsabs, epsrel * np.abs(total))
        failing = total_err > tol
        if not np.any(failing):
            break
        npan = lo.size
        if npan >= max_panels:
            raise NumericAccuracyError(
                f"quadrature budget of {max_panels} panels exhausted",
                estimate=sign * _squeeze(total), error_bound=_squeeze(total_err))
        share = (tol / npan)[None, :]
        split = np.any((err > share) & failing[None, :], axis=1)
        width = hi - lo
        tiny = width <= 64 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        split &= ~tiny
        if not np.any(split):
            # Remaining error sits in panels that cannot be refined further.
            break
        if npan + split.sum() > max_panels:
            order = np.argsort(-(err / np.maximum(tol, 1e-300)[None, :]).max(axis=1))
            allowed = max_panels - npan
            keep = np.zeros_like(split)
            keep[order[:allowed]] = True
            split &= keep
            if not np.any(split):
                raise NumericAccuracyError(
                    f"quadrature budget of {max_panels} panels exhausted",
                    estimate=sign * _squeeze(total), error_bound=_squeeze(total_err))
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        k_new, e_new = _evaluate_panels(func, new_lo, new_hi)
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        kron = np.concatenate([kron[keep], k_new])
        err = np.concatenate([err[keep], e_new])

    value = sign * _squeeze(kron.sum(axis=0))
    if full_output:
        return value, _squeeze(err.sum(axis=0)), lo.size
    return value


def _squeeze(arr):
    arr = np.asarray(arr)
    if arr.shape == (1,):
        return float(arr[0])
    return arr


def _evaluate_panels(func, lo, hi):
    half = 0.5 * (hi - lo)
    centre = 0.5 * (hi + lo)
    x = (centre[:, None] + half[:, None] * NODES[None, :]).ravel()
    y = np.asarray(func(x), dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    y = y.reshape(lo.size, 15, -1)
    kron = np.einsum("pjk,j->pk", y, KRONROD_WEIGHTS) * half[:, None]
    gauss = np.einsum("pjk,j->pk", y, GAUSS_WEIGHTS) * half[:, None]
    return kron, np.abs(kron - gauss)


def power_map(lo, hi, k, toward="lo"):
    """Map ``u`` in ``[0, 1]`` onto ``[lo, hi]`` with density ``u**(k-1)``.

    The map clusters nodes at the chosen endpoint so that an integrable
    singularity of type ``|x - endpoint|**(q - 1)`` becomes ``u**(k*q - 1)``.
    Returns ``(x_of_u, dx_du, u_of_x)``.
    """
    length = hi - lo
    if toward == "lo":
        def x_of_u(u):
            return lo + length * u ** k

        def u_of_x(x):
            return ((np.asarray(x) - lo) / length) ** (1.0 / k)
    else:
        def x_of_u(u):
            return hi - length * u ** k

        def u_of_x(x):
            return ((hi - np.asarray(x)) / length) ** (1.0 / k)

    def dx_du(u):
        return length * k * u ** (k - 1)

    return x_of_u, dx_du, u_of_x


def decade_points(lo, hi, per_decade=1):
    """Geometric breakpoints strictly inside ``(lo, hi)``, ``lo`` may be 0."""
    if hi <= 0:
        return np.empty(0)
    top = math.log10(hi)
    bottom = math.log10(lo) if lo > 0 else top - 14.0
    start = math.floor(bottom * per_decade)
    stop = math.ceil(top * per_decade)
    pts = 10.0 ** (np.arange(start, stop + 1) / per_decade)
    return pts[(pts > lo) & (pts < hi)]


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(func, lo, hi, *, xtol=1e-10, maxiter=200):
    """Golden-section search for a maximum of a unimodal ``func`` on ``[lo, hi]``.

    Returns ``(x_best, f_best)``; the endpoints are included as candidates so a
    maximum sitting at the boundary is reported there.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    it = 0
    while abs(b - a) > xtol * max(1.0, abs(a) + abs(b)) and it < maxiter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = func(d)
        it += 1
    candidates = [(c, fc), (d, fd), (lo, func(lo)), (hi, func(hi))]
    return max(candidates, key=lambda pair: pair[1])


def aitken_limit(seq):
    """Aitken delta-squared limit of the last three terms of ``seq``."""
    a0, a1, a2 = (float(v) for v in seq[-3:])
    d1 = a1 - a0
    d2 = a2 - a1
    denom = d2 - d1
    if denom == 0.0 or abs(d2) <= 1e-15 * max(abs(a2), 1e-300):
        return a2
    return a2 - d2 * d2 / denom
