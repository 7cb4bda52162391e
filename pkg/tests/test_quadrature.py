import math

import numpy as np
import pytest

from rieszweak._quadrature import (aitken_limit, decade_points, golden_max, integrate,
                                   power_map)
from rieszweak.errors import NumericAccuracyError


def test_polynomial_exact():
    assert integrate(lambda x: x ** 5 - 2 * x, 0.0, 2.0) == pytest.approx(64 / 6 - 4, rel=1e-14)


def test_reversed_limits_flip_sign():
    assert integrate(np.exp, 1.0, 0.0) == pytest.approx(-(math.e - 1), rel=1e-13)


def test_vector_valued_components():
    out = integrate(lambda x: np.stack([np.sin(x), np.cos(x)], axis=1), 0.0, math.pi)
    assert out == pytest.approx([2.0, 0.0], abs=1e-12)


def test_breakpoints_resolve_jump():
    val = integrate(lambda x: (x < 0.3).astype(float), 0.0, 1.0, points=[0.3])
    assert val == pytest.approx(0.3, rel=1e-14)


def test_endpoint_singularity_with_power_map():
    # int_0^1 x^(-0.9) dx = 10
    k = 20.0
    x_of_u, dx_du, _ = power_map(0.0, 1.0, k, "lo")
    val = integrate(lambda u: x_of_u(u) ** -0.9 * dx_du(u), 0.0, 1.0)
    assert val == pytest.approx(10.0, rel=1e-10)


def test_power_map_round_trip():
    for toward in ("lo", "hi"):
        x_of_u, _, u_of_x = power_map(2.0, 5.0, 3.0, toward)
        u = np.linspace(0, 1, 11)
        assert np.allclose(u_of_x(x_of_u(u)), u, atol=1e-14)


def test_budget_exhaustion_raises():
    with pytest.raises(NumericAccuracyError) as info:
        integrate(lambda x: np.sin(1.0 / np.maximum(x, 1e-300)), 0.0, 1.0, max_panels=20)
    assert info.value.estimate is not None


def test_decade_points():
    pts = decade_points(0.0, 100.0)
    assert 1.0 in pts and 10.0 in pts and pts.max() < 100.0 and pts.min() > 0


def test_golden_max_interior_and_boundary():
    x, f = golden_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, xtol=1e-12)
    assert x == pytest.approx(0.3, abs=1e-6) and f == pytest.approx(0.0, abs=1e-12)
    x, _ = golden_max(lambda t: t, 0.0, 1.0)
    assert x == 1.0


def test_aitken_geometric_sequence():
    seq = [1 - 0.5 ** k for k in range(6)]
    assert aitken_limit(seq) == pytest.approx(1.0, rel=1e-14)
