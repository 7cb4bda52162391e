"""Structural properties, 100 seeded cases each."""

import numpy as np
import pytest

from _property_cases import (dilation_cases, homogeneity_cases, kernel_cases, materialize,
                             monotonicity_cases, stereographic_cases)
from rieszweak.extremal import inverse_stereographic, jacobians, stereographic
from rieszweak.norms import equivalence_check, riesz_envelope
from rieszweak.radial import ball_mass, riesz_kernel_radial, riesz_potential

HOM, HOM_IDS = materialize(homogeneity_cases())
DIL, DIL_IDS = materialize(dilation_cases())
MONO, MONO_IDS = materialize(monotonicity_cases())
KER, KER_IDS = materialize(kernel_cases())
STE, STE_IDS = materialize(stereographic_cases())


@pytest.mark.parametrize("p,f,c,rho", HOM, ids=HOM_IDS)
def test_homogeneity(p, f, c, rho):
    assert riesz_potential(f.scaled(c), p, rho) == pytest.approx(c * riesz_potential(f, p, rho), rel=1e-10)


@pytest.mark.parametrize("p,f,a,rho", DIL, ids=DIL_IDS)
def test_dilation_covariance(p, f, a, rho):
    # f_a(x) = f(a x) gives I_s f_a(rho) = a^-s I_s f(a rho)
    lhs = riesz_potential(f.dilated(a), p, rho)
    assert lhs == pytest.approx(a ** -p.s * riesz_potential(f, p, a * rho), rel=1e-5)


@pytest.mark.parametrize("p,f,rho0,radii", MONO, ids=MONO_IDS)
def test_monotonicity(p, f, rho0, radii):
    r1, r2 = radii
    assert ball_mass(f, p, rho0, r1) <= ball_mass(f, p, rho0, r2) * (1 + 1e-12)
    # a larger profile has a larger potential
    assert riesz_potential(f, p, rho0) <= riesz_potential(f.scaled(1.5), p, rho0)


@pytest.mark.parametrize("p,a,b", KER, ids=KER_IDS)
def test_kernel_symmetry(p, a, b):
    ab = riesz_kernel_radial(p, a, b, method="angular")
    ba = riesz_kernel_radial(p, b, a, method="angular")
    assert ab == pytest.approx(ba, rel=1e-8)
    assert riesz_kernel_radial(p, a, b) == pytest.approx(ab, rel=1e-8)


@pytest.mark.parametrize("x", STE, ids=STE_IDS)
def test_stereographic_round_trip(x):
    (x,) = x
    back = stereographic(inverse_stereographic(x))
    assert np.max(np.abs(back - x)) <= 1e-12 * max(1.0, float(np.linalg.norm(x)))
    jf, ji = jacobians(x)
    assert jf * ji == pytest.approx(1.0, rel=1e-12)


def test_norm_ordering():
    # weak <= grand <= factor * weak on a few envelopes from the monotonicity cases
    for p, f, _, _ in MONO[:6]:
        F = riesz_envelope(f, p)
        for r in (0.5, 0.5 * (1 + p.critical_r)):
            equivalence_check(F, p, r)
