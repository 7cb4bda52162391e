"""Acceptance criteria 1-12, one test each; the terminal summary prints a pass/fail line per criterion.

Run alone with ``python tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py``.
"""

import math
import sys

import numpy as np
import pytest
from scipy import integrate as si

from conftest import record
from rieszweak import bounds
from rieszweak.constants import (CompositionParams, Params, composition_constant,
                                 extremal_constant, grand_norm_factor, lower_bound, riesz_constant,
                                 sharp_floor, sphere_area, unit_ball_volume, upper_bound)
from rieszweak.errors import InvariantViolation
from rieszweak.extremal import (ExtremalFamily, extremal_envelope, extremal_potential_closed_form,
                                extremal_profile)
from rieszweak.heat import (RATIO_WINDOW, asymptotic_comparison, dyadic_j1, pointwise_tau_bound,
                            split_bound, subordination_check, time_profile)
from rieszweak.norms import (equivalence_check, grand_norm, maximal_envelope, riesz_envelope,
                             small_lambda_limit, weak_norm)
from rieszweak.radial import (dirac_maximal, gaussian_profile, indicator_ball, l1_norm,
                              power_profile, riesz_potential)

SET_1_3 = [(2, 0.5), (3, 1.0), (3, 0.5), (5, 1.0)]
# parameters for the M_s criteria: the reference point and a smaller order
MS_PARAMS = [(3, 1.0), (5, 0.5)]


def g_of(p):
    return extremal_profile(ExtremalFamily(), p)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_01_extremal_closed_form():
    worst = 0.0
    for n, s in SET_1_3:
        p = Params(n, s)
        g = g_of(p)
        for rho in np.concatenate([[0.0], np.geomspace(1e-2, 1e3, 19)]):
            worst = max(worst, rel(riesz_potential(g, p, rho), extremal_potential_closed_form(p, rho)))
    ok = worst <= 1e-6
    record(1, ok, f"max rel err {worst:.2e} over 4 (n,s) x 20 radii (tol 1e-6)")
    assert ok


def test_criterion_02_l1_norm():
    worst = 0.0
    for n, s in SET_1_3:
        p = Params(n, s)
        oracle, _ = si.quad(lambda r: (2 / (1 + r * r)) ** (0.5 * (n + s)) * sphere_area(n) * r ** (n - 1),
                            0, np.inf, epsabs=0, epsrel=1e-13)
        worst = max(worst, rel(l1_norm(g_of(p), p), extremal_constant(p)),
                    rel(extremal_constant(p), oracle))
    ok = worst <= 1e-8
    record(2, ok, f"max rel err {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_03_sharpness():
    worst = 0.0
    for n, s in SET_1_3:
        p = Params(n, s)
        floor = sharp_floor(p)
        for F in (extremal_envelope(p), riesz_envelope(g_of(p), p)):
            worst = max(worst, rel(weak_norm(F, p).value / extremal_constant(p), floor))
    value = (1 / (2 * math.pi ** 2)) * (4 * math.pi / 3) ** (2 / 3)
    pinned = abs(sharp_floor(Params(3, 1.0)) - 0.131642) <= 5e-7 and rel(sharp_floor(Params(3, 1.0)), value) < 1e-14
    ok = worst <= 1e-4 and pinned
    record(3, ok, f"max rel err {worst:.2e} (tol 1e-4); (3,1) floor {value:.6f}")
    assert ok


@pytest.fixture(scope="module")
def ms_envelopes():
    out = {}
    for n, s in MS_PARAMS:
        p = Params(n, s)
        for name, f in (("g", g_of(p)), ("ball", indicator_ball())):
            out[(n, s, name)] = (p, f, maximal_envelope(f, p), riesz_envelope(f, p))
    return out


def test_criterion_04_grand_identities(ms_envelopes):
    worst = 0.0
    for (n, s, name), (p, f, M, I) in ms_envelopes.items():
        l1 = l1_norm(f, p)
        if name == "g":
            worst = max(worst, rel(grand_norm(I, p, 1.0).value / l1, sharp_floor(p) * n / s))
        for r in (1.0, 0.5 * (1 + p.critical_r)):
            worst = max(worst, rel(grand_norm(M, p, r).value / l1, grand_norm_factor(p, r)))
    ok = worst <= 1e-2
    record(4, ok, f"max rel err {worst:.2e} at (n,s) in {MS_PARAMS}, f in (g, ball) (tol 1e-2)")
    assert ok


def test_criterion_05_maximal_weak_norm(ms_envelopes):
    worst, dirac_excess, lower = 0.0, 0.0, np.inf
    for (n, s, name), (p, f, M, _) in ms_envelopes.items():
        l1 = l1_norm(f, p)
        worst = max(worst, rel(weak_norm(M, p).value / l1, 1.0))
        dirac = l1 * np.array([dirac_maximal(p, r) for r in M.radii]) ** p.p
        dirac_excess = max(dirac_excess, float(np.max(M.values / dirac)) - 1)
        lower = min(lower, grand_norm(M, p, 1.0).value / grand_norm_factor(p, 1.0) / l1)
    ok = worst <= 1e-2 and dirac_excess <= 1e-6 and lower >= 1 - 1e-2
    record(5, ok, f"max rel err {worst:.2e} (tol 1e-2); Dirac upper excess {dirac_excess:.1e}; "
                  f"identity lower {lower:.4f}")
    assert ok


def test_criterion_06_sandwich(ms_envelopes):
    envs = [(p, F) for p, _, M, I in ms_envelopes.values() for F in (M, I)]
    for n, s in SET_1_3:
        p = Params(n, s)
        envs.append((p, extremal_envelope(p)))
    p = Params(5, 0.5)
    envs.append((p, bounds._test_envelope(p)))
    count = 0
    try:
        for p, F in envs:
            for r in (0.5, 1.0, 0.5 * (1 + p.critical_r)):
                equivalence_check(F, p, r, slack=1e-6)
                count += 1
        ok, detail = True, f"{count} envelope/r pairs within slack 1e-6"
    except InvariantViolation as exc:
        ok, detail = False, str(exc)
    record(6, ok, detail)
    assert ok


def test_criterion_07_composition():
    worst = 0.0
    for s in (1.0, 0.5):
        p = Params(5, s)
        C = composition_constant(CompositionParams(p, 2.0))
        f = power_profile(3.0)
        for rho in (0.5, 1.0, 2.0):
            conv = riesz_potential(f, p, rho) / riesz_constant(p)
            worst = max(worst, rel(conv, C * rho ** -(5 - s - 2)))
    exact = rel(composition_constant(CompositionParams(Params(5, 1.0), 2.0)), 4 * math.pi ** 2)
    ok = worst <= 1e-4 and exact <= 1e-14
    record(7, ok, f"max rel err {worst:.2e} (tol 1e-4); C_(5,2,1) vs 4 pi^2 {exact:.1e}")
    assert ok


def test_criterion_08_lower_bound_chain():
    details, ok = [], True
    for n, s in ((5, 0.5), (9, 1.0), (3, 0.1)):
        p = Params(n, s)
        k = bounds.LowerBoundConstants.from_params(p)
        rec = bounds.level_set_bound(p)
        good = (k.lambda0 > 0 and rec.measured >= unit_ball_volume(n) * 2.0 ** -n * (1 - 1e-3)
                and rec.identity_residual <= 1e-10
                and lower_bound(p) <= rec.optimized_ratio <= upper_bound(p))
        ok &= good
        details.append(f"({n},{s}) {'ok' if good else 'FAIL'}")
    record(8, ok, "; ".join(details))
    assert ok


def test_criterion_09_small_s_limits():
    worst = 0.0
    for n in (3, 5, 10):
        p = Params(n, 1e-4)
        worst = max(worst, rel(upper_bound(p), 1.0), rel(lower_bound(p), 1 / (2 * n)))
    ok = worst <= 1e-3
    record(9, ok, f"max rel err {worst:.2e} (tol 1e-3)")
    assert ok


def test_criterion_10_appendix():
    p = Params(3, 1.0)
    g = g_of(p)
    residual = max(
        max(subordination_check(g, p, rho) for rho in (0.0, 1.0, 3.0)),
        max(subordination_check(indicator_ball(), Params(3, 0.5), rho) for rho in (0.0, 1.0, 3.0)),
        subordination_check(power_profile(3.0), Params(5, 1.0), 1.0),
    )
    recon, a4 = 0.0, True
    for rho in (0.0, 1.0, 5.0):
        prof = time_profile(g, p, rho)
        pot = riesz_potential(g, p, rho)
        for R in (0.1, 1.0, 10.0):
            sp = split_bound(g, p, rho, R, prof)
            recon = max(recon, rel((sp.J1 + sp.J2) / math.gamma(0.5), pot))
            a4 &= sp.holds
        a4 &= pointwise_tau_bound(g, p, rho, prof).holds_minimized
    recon = max(recon, rel(dyadic_j1(g, p, 1.0, 1.0), split_bound(g, p, 1.0, 1.0).J1))
    rows = asymptotic_comparison([3, 10, 100], np.geomspace(1e-4, 0.5, 13))
    ratios = np.array([[r.ratio, r.majorant_ratio, r.printed_over_minimized] for r in rows])
    table_ok = bool(np.all(np.isfinite(ratios))) and all(r.in_window for r in rows) and bool(
        np.all((ratios >= RATIO_WINDOW[0]) & (ratios <= RATIO_WINDOW[1])))
    ok = residual <= 1e-5 and recon <= 1e-8 and a4 and table_ok
    record(10, ok, f"subordination {residual:.1e} (tol 1e-5); J1+J2 {recon:.1e} (tol 1e-8); "
                   f"tau bound {'holds' if a4 else 'FAILS'}; {len(rows)} table rows in {RATIO_WINDOW}")
    assert ok


def test_criterion_11_small_lambda():
    p = Params(3, 1.0)
    worst = 0.0
    for f in (g_of(p), indicator_ball()):
        lim = small_lambda_limit(riesz_envelope(f, p), p)
        worst = max(worst, rel(lim, sharp_floor(p) * l1_norm(f, p)))
    ok = worst <= 1e-3
    record(11, ok, f"max rel err {worst:.2e} (tol 1e-3)")
    assert ok


def test_criterion_12_properties():
    import test_properties as tp
    counts = {}
    try:
        for args in tp.HOM:
            tp.test_homogeneity(*args)
        counts["homogeneity"] = len(tp.HOM)
        for args in tp.DIL:
            tp.test_dilation_covariance(*args)
        counts["dilation"] = len(tp.DIL)
        for args in tp.MONO:
            tp.test_monotonicity(*args)
        counts["monotonicity"] = len(tp.MONO)
        for args in tp.KER:
            tp.test_kernel_symmetry(*args)
        counts["kernel_symmetry"] = len(tp.KER)
        for args in tp.STE:
            tp.test_stereographic_round_trip(args)
        counts["stereographic"] = len(tp.STE)
        ok = all(v == 100 for v in counts.values()) and len(counts) == 5
        detail = ", ".join(f"{k} {v}" for k, v in counts.items()) + " cases, seed 0"
    except AssertionError as exc:
        ok, detail = False, f"failed after {counts}: {exc}"
    record(12, ok, detail)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
