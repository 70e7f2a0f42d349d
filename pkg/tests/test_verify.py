"""Sweep harness: closed-form anchors and the cheap ends of each scan.
The full-budget sweeps live in the acceptance suite."""

import math

import pytest

from hankelkit.hankel import BumpSpec, make_multiplier
from hankelkit.verify import (
    LemmaQuery,
    TransferQuery,
    composition_identity_check,
    cz_size_scan,
    cz_smooth_scan,
    lemma_bound_scan,
    lemma_ratio,
    norm_scan,
    radial_fourier_check,
    vector_valued_scan,
)
from hankelkit.weights import WeightSpec


class TestCzScans:
    def test_reduced_pair_size_bound(self):
        # (a,b) = (-1/2, 1/2): |K| |x-y| = (2/pi) x/(x+y) < 2/pi,
        # approached as y/x -> 0
        rep = cz_size_scan(-0.5, 0.5, k_range=[0])
        assert rep.measured[0] < 2.0 / math.pi + 1e-9
        assert rep.measured[0] > 0.55

    def test_scaling_invariance(self):
        from hankelkit.transplant import TransplantParams, kernel_eval

        pp = TransplantParams(-0.5, 0.5)
        x, y, c = 2.0, 1.2, 5.0
        v1 = kernel_eval(pp, x, y).value * (x - y)
        v2 = kernel_eval(pp, c * x, c * y).value * (c * x - c * y)
        assert v2 == pytest.approx(v1, rel=1e-9)

    def test_short_uniformity(self):
        rep = cz_size_scan(0.0, 0.7, k_range=range(10, 16))
        assert rep.uniformity_ratio <= 2.0
        rep = cz_smooth_scan(0.0, 0.7, k_range=range(10, 16))
        assert rep.uniformity_ratio <= 2.0

    def test_rejects_large_gap(self):
        with pytest.raises(ValueError):
            cz_size_scan(0.0, 1.5, k_range=[10])


class TestLemma:
    def test_closed_form_anchor(self):
        # gamma=0, lambda=1, c=-1/2, d=1, A=2, B=1:
        # LHS = int (2-s)^-2 = 1/2, RHS expression = 1
        q = LemmaQuery(0.0, 1.0, -0.5, 1.0, 2.0, 1.0)
        assert lemma_ratio(q) == pytest.approx(0.5, rel=1e-9)

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            LemmaQuery(-1.5, 1.0, 0.0, 1.0, 2.0, 1.0)
        with pytest.raises(ValueError):
            LemmaQuery(0.0, 1.0, 0.0, 1.0, 1.0, 2.0)

    def test_scan_stability(self):
        rep = lemma_bound_scan()
        assert rep.uniformity_ratio <= 3.0
        assert all(math.isfinite(m) for m in rep.measured)

    def test_large_d_ratio_small_for_gamma_zero(self):
        # comparison line: ratio bounded by ~Gamma(lambda) for large d
        q = LemmaQuery(0.0, 1.0, 0.0, 100.0, 1.1, 1.0)
        assert lemma_ratio(q) <= 1.0


class TestNormScan:
    def test_refuses_divergent_weight(self):
        with pytest.raises(ValueError):
            norm_scan(0.0, 0.7, k_range=[0], weight=WeightSpec("power", 1.5, 2.0))

    def test_refuses_equal_orders(self):
        with pytest.raises(ValueError):
            norm_scan(0.5, 0.5, k_range=[0])

    def test_isometric_pair_short(self):
        rep = norm_scan(-0.5, 0.5, k_range=range(0, 2))
        assert all(r <= 1.0 + 1e-3 for r in rep.ratios)


class TestIdentities:
    def test_radial_gaussian(self):
        for n in (2, 3):
            assert radial_fourier_check(n) < 1e-6

    def test_radial_dilation(self):
        assert radial_fourier_check(3, sigma=2.0) < 1e-6

    def test_radial_rejects_low_dimension(self):
        with pytest.raises(ValueError):
            radial_fourier_check(1)

    def test_transfer_query_invariants(self):
        with pytest.raises(ValueError):
            TransferQuery(1, 1, 0, make_multiplier("one"))
        q = TransferQuery(3, 2, 1, make_multiplier("one"))
        assert q.order_lo == pytest.approx(1.5)
        assert q.order_hi == pytest.approx(2.5)

    def test_chain_single_factor_exact(self):
        f = BumpSpec(2.0, 0.8).to_function()
        assert composition_identity_check(0.0, 0.7, 1, f) < 1e-8


class TestVectorScan:
    def test_single_entry_reduces_to_norm(self):
        f = BumpSpec(2.0, 0.8).to_function()
        rep = vector_valued_scan(-0.5, 0.5, 2.0, family=[f], k_max=0)
        assert rep.measured[0] == pytest.approx(1.0, abs=2e-3)
