"""Lower-bound construction and the two-sided table."""

import csv
import io
import json
import math

import numpy as np
import pytest
from scipy.special import gamma

from rieszweak import bounds
from rieszweak.constants import (CompositionParams, Params, composition_constant, lower_bound,
                                 riesz_constant, sharp_floor, sphere_area, unit_ball_volume,
                                 upper_bound)
from rieszweak.errors import DomainError
from rieszweak.radial import l1_norm, power_profile, riesz_potential

WINDOW = [(5, 0.5), (9, 1.0), (3, 0.1)]


class TestTestFunction:
    def test_norm(self):
        p = Params(5, 0.5)
        f = bounds.test_function(p)
        omega4 = 2 * math.pi ** 2.5 / gamma(2.5)
        assert l1_norm(f, p) == pytest.approx(omega4 / 2, rel=1e-10)
        assert f(1.0 - 1e-12) == pytest.approx(1.0, rel=1e-9)
        assert f(1.5) == 0.0

    def test_needs_n_above_two(self):
        with pytest.raises(DomainError):
            bounds.test_function(Params(2, 0.1))


class TestComposition:
    @pytest.mark.parametrize("s", [1.0, 0.5])
    def test_convolution_matches_constant(self, s):
        p = Params(5, s)
        f = power_profile(3.0)
        C = composition_constant(CompositionParams(p, 2.0))
        for rho in (0.5, 1.0, 3.0):
            got = riesz_potential(f, p, rho) / riesz_constant(p)
            assert got == pytest.approx(C * rho ** -(5 - s - 2), rel=1e-4)

    def test_c521(self):
        assert composition_constant(CompositionParams(Params(5, 1.0), 2.0)) == pytest.approx(
            4 * math.pi ** 2, rel=1e-13)


class TestConstants:
    @pytest.mark.parametrize("n,s", WINDOW)
    def test_formulas(self, n, s):
        p = Params(n, s)
        k = bounds.LowerBoundConstants.from_params(p)
        c = 4 * math.pi ** (n / 2) / ((n - s - 2) * gamma(n / 2 - 1) * s)
        d = 2 ** (n - s + 1) * math.pi ** (n / 2) / ((n - s - 2) * gamma(n / 2))
        assert k.c == pytest.approx(c, rel=1e-13)
        assert k.d == pytest.approx(d, rel=1e-13)
        assert k.lambda0 > 0
        assert k.c / k.d == pytest.approx((n - 2) / (s * 2 ** (n - s)), rel=1e-13)
        assert k.c / k.d > 2.0 ** -(n - s - 2)
        assert k.c_equals_composition(p) < 1e-13

    def test_outside_window(self):
        with pytest.raises(DomainError):
            bounds.LowerBoundConstants.from_params(Params(3, 0.3))


class TestPointwise:
    def test_quadrature_above_bound(self):
        p = Params(5, 0.5)
        f = bounds.test_function(p)
        for rho in (0.05, 0.1, 0.25, 0.5):
            assert riesz_potential(f, p, rho) / riesz_constant(p) >= bounds.pointwise_bound(p, rho)

    def test_half_radius_is_lambda0(self):
        p = Params(5, 0.5)
        k = bounds.LowerBoundConstants.from_params(p)
        assert bounds.pointwise_bound(p, 0.5) == pytest.approx(k.lambda0 / riesz_constant(p), rel=1e-13)

    def test_blows_up(self):
        p = Params(5, 0.5)
        assert bounds.pointwise_bound(p, 1e-8) > 1e10

    @pytest.mark.parametrize("rho", [0.0, 0.6, -1.0])
    def test_domain(self, rho):
        with pytest.raises(DomainError):
            bounds.pointwise_bound(Params(5, 0.5), rho)


class TestLevelSet:
    @pytest.mark.parametrize("n,s", WINDOW)
    def test_chain(self, n, s):
        p = Params(n, s)
        rec = bounds.level_set_bound(p)
        assert rec.holds
        assert rec.measured >= unit_ball_volume(n) * 2.0 ** -n * (1 - 1e-3)
        assert rec.identity_residual < 1e-10
        assert lower_bound(p) <= rec.optimized_ratio <= upper_bound(p)
        assert rec.witness_ratio <= rec.optimized_ratio * (1 + 1e-9)
        assert sharp_floor(p) <= rec.optimized_ratio

    def test_analytic_side(self):
        p = Params(5, 0.5)
        k = bounds.LowerBoundConstants.from_params(p)
        lhs = k.lambda0 * (unit_ball_volume(5) / 32) ** p.p / (sphere_area(5) / 2)
        assert lhs == pytest.approx(lower_bound(p), rel=1e-10)


class TestTabulate:
    def test_small_s_limits(self):
        (row,) = bounds.tabulate(3, [1e-4])
        assert row.upper == pytest.approx(1.0, rel=1e-3)
        assert row.lower == pytest.approx(1 / 6, rel=1e-3)

    def test_window_edge(self):
        rows = bounds.tabulate(3, [0.1, 0.25, 0.5, 0.25 - 1e-8])
        assert rows[0].lower is not None
        for row in rows[1:]:
            assert row.lower is None and row.upper > 0 and row.flags

    def test_witness_row(self):
        (row,) = bounds.tabulate(5, [0.5], witness=True)
        assert not row.flags
        assert row.lower < row.witness_ratio < row.upper
        assert row.exact_floor <= row.optimized_ratio

    def test_scaled_limits_finite(self):
        from rieszweak.constants import riesz_constant
        s = np.geomspace(1e-4, 0.2, 6)
        for row, si in zip(bounds.tabulate(5, s), s):
            gs = riesz_constant(Params(5, si))
            assert 0 < row.upper * si / gs < np.inf
            assert 0 < row.lower * si / gs < np.inf

    def test_csv_and_json(self):
        rows = bounds.tabulate(3, [0.01, 0.3])
        table = list(csv.reader(io.StringIO(bounds.rows_to_csv(rows))))
        assert table[0] == list(bounds.COLUMNS)
        assert len(table) == 3
        assert table[2][2] == ""
        doc = json.loads(bounds.rows_to_json(rows))
        assert doc["columns"] == list(bounds.COLUMNS)
        assert doc["rows"][1]["lower"] is None and doc["rows"][1]["flags"]

    def test_parallel_matches_serial(self):
        s = [0.05, 0.1]
        a = bounds.tabulate(5, s, witness=True, jobs=2)
        b = bounds.tabulate(5, s, witness=True)
        assert [r.optimized_ratio for r in a] == [r.optimized_ratio for r in b]
