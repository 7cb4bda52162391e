"""Verification suites: each returns a list of :class:`Check` records for one ``(n, s)``.

Suite ids follow the command-line contract: ``thm11`` (grand/weak norm
identities), ``thm12`` (sharp reverse weak-type constant), ``cor1`` (weak norm
of the fractional maximal function), ``thm13`` (two-sided bound on the best
constant) and ``appendix`` (heat-semigroup route).
"""

from __future__ import annotations

import math
import os
from typing import Callable, Dict, List

import numpy as np

from . import heat
from .bounds import (LowerBoundConstants, level_set_bound, pointwise_bound, test_function)
from .constants import (CompositionParams, Params, composition_constant, extremal_constant,
                        gamma_fn, grand_norm_factor, in_lower_window, lower_bound,
                        riesz_constant, sharp_floor, unit_ball_volume, upper_bound)
from .errors import InvariantViolation, RieszWeakError
from .extremal import (ExtremalFamily, distance_identity_check, extremal_envelope,
                       extremal_level_set, extremal_potential_closed_form, extremal_profile,
                       inverse_stereographic, jacobians, sphere_kernel_closed_form,
                       sphere_kernel_integral, stereographic, verify_sharpness)
from .norms import (distribution, equivalence_check, grand_norm, maximal_envelope,
                    riesz_envelope, small_lambda_limit, weak_norm, witness_limit,
                    witness_lower_bound)
from .radial import (RadialProfile, WitnessConfig, dirac_maximal, fractional_maximal,
                     indicator_ball, l1_norm, pointwise_lower_witness, power_profile,
                     riesz_potential)
from .report import Check, at_least, at_most, close, flagged, passed_if, timed

__all__ = ["SUITES", "run_suite", "seed", "suite_thm11", "suite_thm12", "suite_cor1",
           "suite_thm13", "suite_appendix"]

SEED_ENV = "RIESZ_WEAK_SEED"


def seed() -> int:
    """Seed for sampled check points, from ``RIESZ_WEAK_SEED`` (default 0)."""
    return int(os.environ.get(SEED_ENV, "0"))


def _rng(salt):
    return np.random.default_rng([seed(), salt])


def _midpoint_r(p: Params):
    return 0.5 * (1.0 + p.critical_r)


def _unit_ball(p: Params):
    return indicator_ball(height=1.0 / unit_ball_volume(p.n))


def _sandwich(id, anchor, F, p, r, slack):
    try:
        triple = equivalence_check(F, p, r, slack=slack)
    except InvariantViolation as exc:
        return Check(id, anchor, "fail", detail=str(exc), tolerance=slack)
    return Check(id, anchor, "pass", list(triple), None, slack,
                 detail="weak <= grand <= (n/(n - r(n-s)))^(1/r) weak")


def _limit_check(check: Check, res, tol):
    """Downgrade a failed comparison to flagged when the norm's own far-field
    extrapolation is less certain than the tolerance being tested."""
    if check.status != "fail" or not res.attained_in_limit:
        return check
    spread = res.tolerance / res.value if res.value else float("inf")
    if spread <= tol:
        return check
    check.status = "flagged"
    check.detail = (f"{check.detail}; far-field extrapolation uncertainty {spread:.2e} exceeds "
                    f"the tolerance {tol:g}")
    return check


def _guard(id, anchor, func, checks):
    """Run ``func`` and turn a library error into a failed record."""
    try:
        func()
    except RieszWeakError as exc:
        checks.append(Check(id, anchor, "fail", detail=f"{type(exc).__name__}: {exc}"))


# grand norm identities -------------------------------------------------------
def suite_thm11(p: Params, tol_scale=1.0) -> List[Check]:
    checks: List[Check] = []
    anchor = "grand norm identities for I_s f and M_s f"
    sand_anchor = "weak and grand norm equivalence"
    floor = sharp_floor(p)
    r_mid = _midpoint_r(p)
    g = extremal_profile(ExtremalFamily(), p)
    ball = indicator_ball()
    profiles = {"g": g, "ball": ball}
    riesz, maximal = {}, {}
    for name, f in profiles.items():
        l1 = l1_norm(f, p)
        with timed(checks):
            riesz[name] = riesz_envelope(f, p, label=f"riesz:{name}")
            for tag, r in (("r1", 1.0), ("rmid", r_mid)):
                res = grand_norm(riesz[name], p, r)
                checks.append(_limit_check(close(f"thm11.riesz.{name}.{tag}", anchor, res.value / l1,
                                                 floor * grand_norm_factor(p, r), 1e-2 * tol_scale,
                                                 detail=f"r={r:.6g}"), res, 1e-2 * tol_scale))
        with timed(checks):
            # Below r = 1 only the lower inequality is asserted.
            res = grand_norm(riesz[name], p, 0.5)
            checks.append(_limit_check(at_least(f"thm11.riesz.{name}.r_half",
                                                "reverse inequality for r < 1", res.value / l1,
                                                floor * grand_norm_factor(p, 0.5), 1e-2 * tol_scale),
                                       res, 1e-2 * tol_scale))
        with timed(checks):
            maximal[name] = maximal_envelope(f, p, label=f"maximal:{name}")
            for tag, r in (("r1", 1.0), ("rmid", r_mid)):
                res = grand_norm(maximal[name], p, r)
                checks.append(_limit_check(close(f"thm11.maximal.{name}.{tag}", anchor, res.value / l1,
                                                 grand_norm_factor(p, r), 1e-2 * tol_scale,
                                                 detail=f"r={r:.6g}"), res, 1e-2 * tol_scale))
    for kind, envs in (("riesz", riesz), ("maximal", maximal)):
        for name, F in envs.items():
            for tag, r in (("r_half", 0.5), ("r1", 1.0), ("rmid", r_mid)):
                with timed(checks):
                    checks.append(_sandwich(f"thm11.sandwich.{kind}.{name}.{tag}", sand_anchor,
                                            F, p, r, 1e-6 * tol_scale))
    checks.extend(_witness_checks(p, riesz, tol_scale))
    return checks


def _witness_checks(p, riesz, tol_scale):
    checks: List[Check] = []
    anchor = "ball witness for the grand norm lower bound"
    unit = _unit_ball(p)
    cfg = WitnessConfig(0.0, 1e4, 1.0)
    with timed(checks):
        limit = witness_limit(cfg, p)
        at_l = witness_lower_bound(unit, cfg, p)
        gap = (limit - at_l) / limit
        far = (limit - witness_lower_bound(unit, WitnessConfig(0.0, 1e5, 1.0), p)) / limit
        tol = 1e-4 * tol_scale
        if 0 <= gap <= tol:
            checks.append(Check("thm11.witness.l1e4", anchor, "pass", at_l, limit, tol,
                                detail=f"relative gap {gap:.3e}"))
        elif 0 < far < gap:
            # The l -> inf approach is algebraically slow for some (n, s); record it.
            checks.append(flagged("thm11.witness.l1e4", anchor,
                                  f"relative gap {gap:.3e} at l=1e4 exceeds {tol:g}; still "
                                  f"converging ({far:.3e} at l=1e5)", measured=at_l))
        else:
            checks.append(Check("thm11.witness.l1e4", anchor, "fail", at_l, limit, tol,
                                detail=f"relative gap {gap:.3e}, {far:.3e} at l=1e5"))
    with timed(checks):
        small = witness_lower_bound(unit, WitnessConfig(0.0, 0.01, 1.0), p)
        checks.append(passed_if("thm11.witness.small_l", anchor, small < limit, small, limit,
                                detail="finite l stays strictly below the limit"))
    with timed(checks):
        ls = np.geomspace(0.01, 1e4, 13)
        vals = [witness_lower_bound(unit, WitnessConfig(0.0, float(l), 1.0), p) for l in ls]
        checks.append(passed_if("thm11.witness.monotone_l", anchor,
                                bool(np.all(np.diff(vals) > 0)), detail="increasing in l"))
    with timed(checks):
        grand = grand_norm(riesz["ball"].scaled(1.0 / unit_ball_volume(p.n)), p, 1.0).value
        checks.append(at_least("thm11.witness.below_grand", anchor, grand, at_l, 1e-6 * tol_scale))
    with timed(checks):
        rng = _rng(11)
        radii = np.sort(rng.uniform(0.0, 20.0, 50))
        gam = riesz_constant(p)
        ok, worst = True, math.inf
        for rho in radii:
            lhs = riesz_potential(unit, p, rho) / gam
            rhs = pointwise_lower_witness(unit, WitnessConfig(0.0, 1.0, 1.0), p, rho)
            worst = min(worst, lhs / rhs)
            ok &= lhs >= rhs * (1 - 1e-9 * tol_scale)
        checks.append(passed_if("thm11.witness.pointwise", anchor, ok, worst, 1.0,
                                detail="min of I_s f / (gamma_s (1-eps)(rho+R)^(s-n)) over 50 radii"))
    return checks


# sharp reverse weak-type constant ---------------------------------------------
def suite_thm12(p: Params, tol_scale=1.0) -> List[Check]:
    checks: List[Check] = []
    anchor = "extremal family closed forms"
    checks.extend(verify_sharpness(p, tol_scale=tol_scale, prefix="thm12.sharp"))
    g = extremal_profile(ExtremalFamily(), p)
    c = extremal_constant(p)
    with timed(checks):
        checks.append(close("thm12.l1_norm", anchor, l1_norm(g, p), c, 1e-8 * tol_scale))
    with timed(checks):
        radii = np.concatenate([[0.0], np.geomspace(0.01, 100.0, 19)])
        exact = extremal_potential_closed_form(p, radii)
        quad = np.array([riesz_potential(g, p, r) for r in radii])
        err = float(np.max(np.abs(quad / exact - 1)))
        checks.append(at_most("thm12.potential_closed_form", anchor, err, 1e-6 * tol_scale,
                              detail="max relative error over 20 radii in [0, 100]"))
    with timed(checks):
        closed = sphere_kernel_closed_form(p)
        checks.append(close("thm12.sphere_kernel", "spherical kernel integral",
                            sphere_kernel_integral(p), closed, 1e-6 * tol_scale))
        rng = _rng(12)
        bases = [rng.normal(size=p.n) for _ in range(3)]
        vals = [sphere_kernel_integral(p, b, method="pullback") for b in bases]
        spread = (max(vals) - min(vals)) / closed
        checks.append(at_most("thm12.sphere_kernel_poles", "spherical kernel integral", spread,
                              1e-8 * tol_scale, detail="three base points"))
    with timed(checks):
        rng = _rng(13)
        xs = rng.normal(size=(100, p.n)) * rng.uniform(0.1, 10.0, size=(100, 1))
        trip = max(float(np.max(np.abs(stereographic(inverse_stereographic(x)) - x))) /
                   max(1.0, float(np.linalg.norm(x))) for x in xs)
        recip = max(abs(jacobians(x)[0] * jacobians(x)[1] - 1) for x in xs)
        dist = max(distance_identity_check(xs[i], xs[i + 1]) for i in range(0, 100, 2))
        checks.append(at_most("thm12.stereographic_round_trip", "stereographic projection", trip,
                              1e-12 * tol_scale))
        checks.append(at_most("thm12.jacobian_reciprocity", "stereographic projection", recip,
                              1e-12 * tol_scale))
        checks.append(at_most("thm12.distance_identity", "stereographic projection", dist,
                              1e-10 * tol_scale))
    with timed(checks):
        F = extremal_envelope(p)
        K = F.values[0]
        lams = K * np.concatenate([np.geomspace(1e-6, 0.5, 12), 1.0 - np.geomspace(1e-6, 0.4, 6)])
        measured = np.array([distribution(F, p, lam) for lam in lams])
        err = float(np.max(np.abs(measured / extremal_level_set(p, lams) - 1)))
        checks.append(at_most("thm12.level_set_formula", "level sets of the extremal potential",
                              err, 1e-8 * tol_scale,
                              detail="levels up to (1 - 1e-6) of the maximum"))
    anchor_small = "small-level limit of the weak quasi-norm"
    for name, f in (("g", g), ("ball", indicator_ball())):
        with timed(checks):
            def run(name=name, f=f):
                F = riesz_envelope(f, p)
                lim = small_lambda_limit(F, p)
                checks.append(close(f"thm12.small_lambda.{name}", anchor_small, lim,
                                    floor_l1(p, f), 1e-3 * tol_scale))
            _guard(f"thm12.small_lambda.{name}", anchor_small, run, checks)
    return checks


def floor_l1(p, f):
    return sharp_floor(p) * l1_norm(f, p)


# weak norm of M_s -----------------------------------------------------------
def suite_cor1(p: Params, tol_scale=1.0) -> List[Check]:
    checks: List[Check] = []
    anchor = "weak norm of the fractional maximal function"
    profiles = {"g": extremal_profile(ExtremalFamily(), p), "ball": indicator_ball()}
    for name, f in profiles.items():
        l1 = l1_norm(f, p)
        with timed(checks):
            F = maximal_envelope(f, p)
            weak = weak_norm(F, p)
            checks.append(_limit_check(close(f"cor1.weak.{name}", anchor, weak.value / l1, 1.0,
                                             1e-2 * tol_scale,
                                             detail=f"attained_in_limit={weak.attained_in_limit}"),
                                       weak, 1e-2 * tol_scale))
            dirac = l1 * np.array([dirac_maximal(p, r) for r in F.radii]) ** p.p
            excess = float(np.max(F.values / dirac))
            checks.append(at_most(f"cor1.dirac_upper.{name}", "point-mass comparison", excess,
                                  1.0, 1e-6 * tol_scale,
                                  detail="max of M_s f / (||f||_1 (v_n rho^n)^(-(n-s)/n))"))
            res = grand_norm(F, p, 1.0)
            lower = res.value / grand_norm_factor(p, 1.0) / l1
            checks.append(_limit_check(at_least(
                f"cor1.identity_lower.{name}", anchor, lower, 1.0, 1e-2 * tol_scale,
                detail="grand norm at r = 1 divided by its equivalence factor"), res, 1e-2 * tol_scale))
    with timed(checks):
        radii = np.geomspace(1e-3, 1e3, 25)
        lams = np.array([dirac_maximal(p, r) for r in radii])
        prod = lams * unit_ball_volume(p.n) * radii ** p.n
        checks.append(at_most("cor1.dirac_weak_identity", "point-mass maximal function",
                              float(np.max(np.abs(prod - 1))), 1e-12 * tol_scale,
                              detail="lambda |{M delta > lambda}| = 1"))
    checks.extend(_domination_checks(p, profiles["g"], tol_scale))
    return checks


def _domination_checks(p, g, tol_scale):
    checks: List[Check] = []
    anchor = "pointwise domination of M_s by I_s"
    v, gam = unit_ball_volume(p.n), riesz_constant(p)
    divided = v ** (-p.p) / gam      # (1/gamma_s) v_n^((s-n)/n)
    multiplied = v ** p.p / gam      # 1/(gamma_s v_n^((s-n)/n))
    with timed(checks):
        radii = np.sort(_rng(21).uniform(0.0, 50.0, 50))
        ratio = np.array([fractional_maximal(g, p, r) / riesz_potential(g, p, r) for r in radii])
        checks.append(at_most("cor1.domination", anchor, float(np.max(ratio / divided)), 1.0,
                              1e-6 * tol_scale,
                              detail="max of M_s g / (gamma_s^-1 v_n^((s-n)/n) I_s g) at 50 radii"))
    with timed(checks):
        # Compact support makes the far-field ratio converge like 1/rho.
        ball, far = indicator_ball(), 1e4
        tight = fractional_maximal(ball, p, far) / (divided * riesz_potential(ball, p, far))
        loose = tight * divided / multiplied
        checks.append(close("cor1.grouping", anchor, tight, 1.0, 1e-3 * tol_scale,
                            detail=("v_n^((s-n)/n) multiplies 1/gamma_s: the bound holds and is "
                                    "tight in the far field of the unit ball; the other grouping "
                                    f"gives ratio {loose:.4g} there")))
    return checks


# two-sided bound on the best constant ------------------------------------------
def suite_thm13(p: Params, tol_scale=1.0) -> List[Check]:
    checks: List[Check] = []
    anchor = "two-sided bound on the best weak-type constant"
    comp_anchor = "composition of two Riesz kernels"
    alpha = 2.0
    if alpha < p.n and alpha + p.s < p.n:
        with timed(checks):
            cp = CompositionParams(p, alpha)
            C = composition_constant(cp)
            pot = riesz_potential(power_profile(p.n - alpha), p, 1.0) / riesz_constant(p)
            checks.append(close("thm13.composition", comp_anchor, pot, C, 1e-4 * tol_scale,
                                detail="alpha = 2, |x| = 1"))
            swapped = composition_constant(CompositionParams(Params(p.n, alpha), p.s))
            checks.append(close("thm13.composition_symmetry", comp_anchor, swapped, C,
                                1e-12 * tol_scale))
    else:
        checks.append(flagged("thm13.composition", comp_anchor, "needs alpha + s < n with alpha = 2"))
    if p.n > 2:
        with timed(checks):
            q = Params(p.n, 1e-4)
            checks.append(close("thm13.upper_small_s", anchor, upper_bound(q), 1.0, 1e-3 * tol_scale))
            checks.append(close("thm13.lower_small_s", anchor, lower_bound(q), 1.0 / (2 * p.n),
                                1e-3 * tol_scale))
    if not in_lower_window(p.n, p.s):
        checks.append(flagged("thm13.window", anchor,
                              f"(n={p.n}, s={p.s}) outside the window n > 2, 0 < s < (n-2)/4; "
                              "only the upper bound applies"))
        return checks
    with timed(checks):
        k = LowerBoundConstants.from_params(p)
        checks.append(passed_if("thm13.lambda0_positive", anchor, k.lambda0 > 0, k.lambda0, 0.0))
        checks.append(passed_if("thm13.c_over_d", anchor,
                                k.c / k.d > 2.0 ** (-(p.n - p.s - 2)), k.c / k.d,
                                2.0 ** (-(p.n - p.s - 2))))
        checks.append(at_most("thm13.c_is_composition", anchor, k.c_equals_composition(p),
                              1e-12 * tol_scale))
        checks.append(close("thm13.half_radius", anchor, pointwise_bound(p, 0.5),
                            k.lambda0 / riesz_constant(p), 1e-12 * tol_scale))
    with timed(checks):
        f = test_function(p)
        gam = riesz_constant(p)
        worst = min(riesz_potential(f, p, r) / gam / pointwise_bound(p, r)
                    for r in (0.05, 0.1, 0.25, 0.5))
        checks.append(at_least("thm13.pointwise_bound", anchor, worst, 1.0, 1e-9 * tol_scale,
                               detail="min over rho in {0.05, 0.1, 0.25, 0.5}"))
    with timed(checks):
        rec = level_set_bound(p, rtol=1e-3 * tol_scale)
        checks.append(at_least("thm13.level_set", anchor, rec.measured, rec.required,
                               1e-3 * tol_scale))
        checks.append(at_most("thm13.ratio_identity", anchor, rec.identity_residual,
                              1e-10 * tol_scale))
        lo, up = lower_bound(p), upper_bound(p)
        checks.append(at_most("thm13.lower_below_witness", anchor, lo, rec.optimized_ratio,
                              1e-3 * tol_scale))
        checks.append(at_most("thm13.witness_below_upper", anchor, rec.optimized_ratio, up,
                              1e-3 * tol_scale))
        checks.append(at_least("thm13.witness_above_floor", anchor, rec.optimized_ratio,
                               sharp_floor(p), 1e-3 * tol_scale))
        checks.append(at_most("thm13.printed_level_below_optimized", anchor, rec.witness_ratio,
                              rec.optimized_ratio, 1e-9 * tol_scale))
    return checks


# heat-semigroup route ----------------------------------------------------------
def suite_appendix(p: Params, tol_scale=1.0) -> List[Check]:
    checks: List[Check] = []
    anchor = "heat semigroup representation"
    checks.append(flagged("appendix.heat_exponent", anchor,
                          "the Gaussian is exp(-|x|^2/(4t)) with prefactor (4 pi t)^(-n/2); "
                          "exp(-|x|^2/t) would give total mass 2^-n and break the normalization"))
    g = extremal_profile(ExtremalFamily(), p)
    ball = indicator_ball()
    with timed(checks):
        prof_g0 = heat.time_profile(g, p, 0.0)
        exact = extremal_potential_closed_form(p, 0.0)
        res = heat.subordination_check(g, p, 0.0, reference=exact, profile=prof_g0)
        checks.append(at_most("appendix.subordination.g", anchor, res, 1e-5 * tol_scale))
    for rho in (0.0, 1.0, 3.0):
        with timed(checks):
            res = heat.subordination_check(ball, p, rho)
            checks.append(at_most(f"appendix.subordination.ball.rho{rho:g}", anchor, res,
                                  1e-5 * tol_scale))
    if p.n > 2 + p.s:
        with timed(checks):
            C = composition_constant(CompositionParams(p, 2.0))
            res = heat.subordination_check(power_profile(p.n - 2.0), p, 1.0,
                                           reference=riesz_constant(p) * C)
            checks.append(at_most("appendix.subordination.power", anchor, res, 1e-4 * tol_scale))
    with timed(checks):
        checks.append(passed_if("appendix.log_majorization", "elementary majorization",
                                heat.log_majorization_holds(np.geomspace(1e-8, 50.0, 2001)),
                                detail="2^(s/2) - 1 > (ln 2 / 2) s"))
    with timed(checks):
        rows = heat.asymptotic_comparison([3, 10, 100], np.geomspace(1e-4, 0.5, 13))
        bad = [(r.n, r.s) for r in rows if not r.in_window]
        worst = max(abs(r.printed_over_minimized - 1) for r in rows)
        checks.append(passed_if("appendix.tau_table", "constants comparison", not bad,
                                detail=f"ratios outside [0.05, 20] at {bad}" if bad
                                else "all ratios inside [0.05, 20]"))
        checks.append(at_most("appendix.tau_printed_vs_minimized", "constants comparison", worst,
                              1e-12 * tol_scale, detail="printed tau equals the envelope minimum"))
    if not p.s < 2:
        checks.append(flagged("appendix.split", anchor,
                              "the dyadic short-time bound needs s < 2; split checks skipped"))
        return checks
    split_anchor = "short/long time split and its majorants"
    gam_half = gamma_fn(0.5 * p.s)
    for R in (0.1, 1.0, 10.0):
        with timed(checks):
            sp = heat.split_bound(g, p, 0.0, R, prof_g0)
            checks.append(close(f"appendix.split.R{R:g}.reconstruction", split_anchor,
                                sp.J1 + sp.J2, gam_half * exact, 1e-8 * tol_scale))
            checks.append(passed_if(f"appendix.split.R{R:g}.majorants", split_anchor, sp.holds,
                                    [sp.J1, sp.J2], [sp.J1_majorant, sp.J2_majorant],
                                    detail="; ".join(sp.violations) or "both pieces dominated"))
    with timed(checks):
        direct = prof_g0.upto(0.5 * p.s, 1.0)
        checks.append(close("appendix.split.dyadic", split_anchor,
                            heat.dyadic_j1(g, p, 0.0, 1.0), direct, 1e-8 * tol_scale))
    tau_anchor = "pointwise bound through the averaged maximal function"
    for rho in (0.0, 1.0, 5.0):
        with timed(checks):
            prof = prof_g0 if rho == 0.0 else heat.time_profile(g, p, rho)
            rec = heat.pointwise_tau_bound(g, p, rho, prof)
            checks.append(at_most(f"appendix.tau_bound.rho{rho:g}", tau_anchor, rec.potential,
                                  rec.rhs_minimized, 1e-9 * tol_scale,
                                  detail=f"printed tau holds: {rec.holds_printed}"))
            checks.append(at_least(f"appendix.m0_above_f.rho{rho:g}", tau_anchor, rec.M0,
                                   float(g(rho)), 1e-3 * tol_scale))
    weak_anchor = "weak (1,1) bound for the averaged maximal function"
    radii = np.geomspace(0.05, 100.0, 8)
    for name, f in (("g", g), ("ball", ball)):
        with timed(checks):
            worst = float(np.max(heat.averaged_maximal_weak11(f, p, radii)))
            checks.append(at_most(f"appendix.weak11.{name}", weak_anchor, worst, 1.0,
                                  1e-2 * tol_scale, detail="sampled, not proved"))
    return checks


SUITES: Dict[str, Callable[..., List[Check]]] = {
    "thm11": suite_thm11,
    "thm12": suite_thm12,
    "cor1": suite_cor1,
    "thm13": suite_thm13,
    "appendix": suite_appendix,
}


def run_suite(name: str, n: int, s: float, tol_scale: float = 1.0) -> List[Check]:
    """Picklable entry point for parallel runs."""
    return SUITES[name](Params(n, s), tol_scale)
