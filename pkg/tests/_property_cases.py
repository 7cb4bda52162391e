"""Seeded case generators for the property suite (100 cases per property)."""

import numpy as np

from rieszweak.constants import Params
from rieszweak.extremal import ExtremalFamily, extremal_profile
from rieszweak.radial import gaussian_profile, indicator_ball

SEED = 0
N_CASES = 100
DIMENSIONS = (1, 2, 3, 4, 5, 7)


def _rng(salt):
    return np.random.default_rng([SEED, salt])


def random_params(rng):
    n = int(rng.choice(DIMENSIONS))
    s = float(rng.uniform(0.05, min(n, 3.0) - 0.05))
    return Params(n, s)


def random_profile(rng, p):
    kind = rng.integers(3)
    if kind == 0:
        return "ball", indicator_ball(radius=float(rng.uniform(0.3, 2.0)))
    if kind == 1:
        return "gaussian", gaussian_profile(float(rng.uniform(0.3, 2.0)))
    return "extremal", extremal_profile(ExtremalFamily(a=float(rng.uniform(0.5, 3.0)),
                                                      b=float(rng.uniform(0.3, 2.0))), p)


def homogeneity_cases():
    rng = _rng(1)
    for i in range(N_CASES):
        p = random_params(rng)
        name, f = random_profile(rng, p)
        yield pytest_id("hom", i, p, name), p, f, float(10 ** rng.uniform(-3, 3)), float(10 ** rng.uniform(-2, 1))


def dilation_cases():
    rng = _rng(2)
    for i in range(N_CASES):
        p = random_params(rng)
        name, f = random_profile(rng, p)
        yield pytest_id("dil", i, p, name), p, f, float(10 ** rng.uniform(-1, 1)), float(10 ** rng.uniform(-2, 1))


def monotonicity_cases():
    rng = _rng(3)
    for i in range(N_CASES):
        p = random_params(rng)
        name, f = random_profile(rng, p)
        radii = np.sort(10 ** rng.uniform(-2, 1.5, 2))
        yield pytest_id("mono", i, p, name), p, f, float(10 ** rng.uniform(-2, 1)), radii


def kernel_cases():
    rng = _rng(4)
    for i in range(N_CASES):
        p = random_params(rng)
        a, b = 10 ** rng.uniform(-2, 2, 2)
        yield pytest_id("ker", i, p, ""), p, float(a), float(b)


def stereographic_cases():
    rng = _rng(5)
    for i in range(N_CASES):
        n = int(rng.choice(DIMENSIONS))
        yield f"st{i}-n{n}", rng.normal(size=n) * 10 ** rng.uniform(-3, 3)


def pytest_id(prefix, i, p, name):
    return f"{prefix}{i}-n{p.n}-s{p.s:.3f}" + (f"-{name}" if name else "")


def materialize(gen):
    cases = list(gen)
    return [c[1:] for c in cases], [c[0] for c in cases]
