"""Muckenhoupt-style weight machinery: characteristics, divergence
flags, and weighted norms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelkit.grids import GridFn, composite_grid
from hankelkit.weights import (
    NormQuery,
    WeightSpec,
    ap_characteristic,
    dyadic_family,
    parse_weight,
    weight_bank,
    weighted_lp_norm,
)


class TestWeightSpec:
    def test_power_evaluation(self):
        w = WeightSpec("power", 0.5, 2.0)
        assert w(4.0) == pytest.approx(2.0)
        assert w.q == pytest.approx(2.0)

    def test_parse(self):
        assert parse_weight("pow:0.25").delta == 0.25
        assert parse_weight("minpow:0.5").kind == "piecewise"
        assert parse_weight("one").delta == 0.0
        with pytest.raises(ValueError):
            parse_weight("exp:1")

    def test_integral_of_power_matches_quadrature(self):
        # int_a^b u(x)^r dx for the truncated power weight
        w = WeightSpec("piecewise", 0.5, 2.0)
        a, b = 0.25, 3.0
        xs = np.linspace(a, b, 200_001)
        ref = np.trapezoid(w(xs) ** 0.3, xs)
        assert w.integral_of_power(0.3, a, b) == pytest.approx(ref, rel=1e-6)


class TestApCharacteristic:
    def test_unweighted_is_one(self):
        res = ap_characteristic(WeightSpec("power", 0.0, 2.0))
        assert res.value == pytest.approx(1.0, rel=1e-9)
        assert not res.divergent

    def test_characteristic_at_least_one(self):
        for w in weight_bank(2.0):
            res = ap_characteristic(w)
            assert res.value >= 1.0 - 1e-12

    def test_symmetric_powers_match(self):
        plus = ap_characteristic(WeightSpec("power", 0.5, 2.0))
        minus = ap_characteristic(WeightSpec("power", -0.5, 2.0))
        assert plus.value == pytest.approx(minus.value, rel=1e-6)

    def test_inside_range_finite(self):
        for delta in (-0.9, -0.5, 0.5, 0.9):
            res = ap_characteristic(WeightSpec("power", delta, 2.0))
            assert not res.divergent and math.isfinite(res.value)

    def test_outside_range_divergent(self):
        for delta in (-1.5, 1.5):
            assert ap_characteristic(WeightSpec("power", delta, 2.0)).divergent

    def test_truncated_power(self):
        # min(1, x)^delta tames the growth at infinity but keeps the
        # origin behavior: finite inside |delta| < 1, divergent beyond
        assert not ap_characteristic(WeightSpec("piecewise", 0.9, 2.0)).divergent
        assert ap_characteristic(WeightSpec("piecewise", 1.5, 2.0)).divergent

    def test_dyadic_family_shape(self):
        fam = dyadic_family(-2, 2)
        assert all(a < b for a, b in fam)
        assert (0.0, 4.0) in fam


class TestWeightedNorm:
    def test_indicator_norm(self):
        g = composite_grid(0.0, 1.0, 4.0)
        fn = GridFn(g, np.where(g.nodes < 0.5, 1.0, 0.0))
        val = weighted_lp_norm(NormQuery(fn, WeightSpec("power", 0.0, 2.0)))
        assert val == pytest.approx(math.sqrt(0.5), rel=1e-3)

    def test_power_weight_changes_norm(self):
        g = composite_grid(0.0, 1.0, 4.0)
        fn = GridFn(g, np.ones(len(g)))
        flat = weighted_lp_norm(NormQuery(fn, WeightSpec("power", 0.0, 2.0)))
        tilted = weighted_lp_norm(NormQuery(fn, WeightSpec("power", 0.5, 2.0)))
        # int_0^1 x^0.5 dx = 2/3
        # the sqrt-type corner at 0 limits panel accuracy to ~1e-5
        assert tilted**2 / flat**2 == pytest.approx(2.0 / 3.0, rel=1e-4)

    @given(st.floats(min_value=0.1, max_value=10.0))
    @settings(max_examples=20, deadline=None)
    def test_homogeneity(self, c):
        g = composite_grid(0.0, 1.0, 4.0)
        fn = GridFn(g, np.sin(3.0 * g.nodes))
        fnc = GridFn(g, c * np.sin(3.0 * g.nodes))
        w = WeightSpec("power", 0.25, 2.0)
        n1 = weighted_lp_norm(NormQuery(fn, w))
        n2 = weighted_lp_norm(NormQuery(fnc, w))
        assert n2 == pytest.approx(c * n1, rel=1e-10)
