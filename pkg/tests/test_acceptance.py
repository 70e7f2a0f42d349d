"""End-to-end acceptance checks.

Each test pins one headline guarantee of the library at its stated
tolerance and wall-clock budget: special-function anchors, transform
identities, kernel closed forms and method agreement, the uniformity
sweeps, the transference identity, and deterministic reporting.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from hankelkit.cli import main as cli_main
from hankelkit.hankel import (
    bump_bank,
    hankel_apply,
    make_multiplier,
    plancherel_defect,
    transform_stage,
)
from hankelkit.specfun import bessel_j, gamma, hyp2f1
from hankelkit.transplant import (
    TransplantParams,
    kernel_dx,
    kernel_eval,
    transplant_composition,
    transplant_kernel_form,
)
from hankelkit.verify import (
    TransferQuery,
    cz_size_scan,
    cz_smooth_scan,
    lemma_bound_scan,
    lemma_ratio,
    norm_scan,
    radial_fourier_check,
    transference_identity_check,
    vector_valued_scan,
)
from hankelkit.verify import LemmaQuery
from hankelkit.weights import WeightSpec, ap_characteristic, weight_bank


class Budget:
    """Asserts the enclosed block stays under a wall-clock limit."""

    def __init__(self, seconds: float):
        self.limit = seconds

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        if exc[0] is None:
            elapsed = time.monotonic() - self.t0
            assert elapsed < self.limit, f"took {elapsed:.1f}s, budget {self.limit}s"


class TestSpecialFunctionAnchors:
    def test_anchors(self):
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-9)
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-9)
        x = 1.7
        assert bessel_j(0.5, x) == pytest.approx(
            math.sqrt(2.0 / (math.pi * x)) * math.sin(x), rel=1e-9
        )
        assert bessel_j(-0.5, x) == pytest.approx(
            math.sqrt(2.0 / (math.pi * x)) * math.cos(x), rel=1e-9
        )
        assert bessel_j(0.0, 1.0) == pytest.approx(0.765197686557966551, rel=1e-9)
        # 2F1(1, b; b; z) = (1 - z)^-1
        for b, z in ((2.5, 0.3), (0.75, 0.6)):
            assert hyp2f1(1.0, b, b, z) == pytest.approx(1.0 / (1.0 - z), rel=1e-9)
        assert hyp2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(2.0 * math.log(2.0), rel=1e-9)
        assert hyp2f1(0.25, 0.75, 1.25, 0.5) == pytest.approx(
            1.10243939899658277, rel=1e-9
        )


class TestTransformIdentities:
    def test_involution_and_plancherel_over_bank(self):
        # double transform returns the input and energy is preserved,
        # across orders and the whole bump bank
        with Budget(120):
            for nu in (-0.5, 0.0, 0.5, 2.0, 5.5):
                for f in bump_bank():
                    lo, hi = f.support
                    g = transform_stage(nu, f, use_freq=max(8.0, 2.0 * hi),
                                        tail_tol=1e-8)
                    xs = np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 9)
                    back = hankel_apply(nu, g, xs)
                    scale = np.max(np.abs(f(xs)))
                    assert np.max(np.abs(back - f(xs))) < 1e-6 * scale
                    assert plancherel_defect(nu, f) < 1e-6

    def test_radial_gaussian(self):
        for n in (2, 3):
            assert radial_fourier_check(n) < 1e-6


class TestKernelClosedForm:
    def test_reduced_pair(self):
        pp = TransplantParams(-0.5, 0.5)
        mirror = TransplantParams(0.5, -0.5)
        for ratio in np.linspace(0.05, 0.95, 10):
            x, y = 2.0, 2.0 * ratio
            ref = (2.0 / math.pi) * x / (x**2 - y**2)
            assert kernel_eval(pp, x, y).value == pytest.approx(ref, rel=1e-10)
            # mirrored branch, evaluated above the diagonal
            ref_m = (2.0 / math.pi) * x / (x**2 - y**2)
            assert kernel_eval(mirror, y, x).value == pytest.approx(ref_m, rel=1e-10)

    def test_methods_agree_to_high_shift(self):
        for k in (0, 10, 25, 50):
            pp = TransplantParams.shifted(0.0, 0.7, k)
            for (x, y) in ((2.0, 1.0), (1.0, 1.8), (3.0, 2.9)):
                direct = kernel_eval(pp, x, y, "2f1").value
                stab = kernel_eval(pp, x, y, "euler").value
                assert stab == pytest.approx(direct, rel=1e-8)


class TestOperatorForms:
    @pytest.mark.parametrize("pair", [(-0.5, 0.5), (0.0, 0.7), (0.3, 1.1)])
    def test_composition_matches_kernel_form(self, pair):
        from hankelkit.hankel import BumpSpec

        f = BumpSpec(2.0, 0.8).to_function()
        xs = np.array([0.8, 1.7, 3.1])
        with Budget(200):
            for k in (0, 1, 5, 10):
                pp = TransplantParams.shifted(pair[0], pair[1], k)
                comp = transplant_composition(pp, f, xs)
                for x, c in zip(xs, comp):
                    kern = transplant_kernel_form(pp, f, float(x))
                    assert kern == pytest.approx(c, rel=1e-4, abs=1e-7)


class TestKernelUniformity:
    @pytest.mark.parametrize("pair", [(-0.5, 0.5), (0.0, 0.7), (0.3, 1.1)])
    def test_size_and_smoothness_scans(self, pair):
        with Budget(100):
            rep = cz_size_scan(pair[0], pair[1], range(10, 51))
            assert rep.uniformity_ratio <= 2.0
            rep = cz_smooth_scan(pair[0], pair[1], range(10, 51))
            assert rep.uniformity_ratio <= 2.0

    def test_derivative_matches_finite_differences(self):
        h = 1e-6
        for k in (10, 30, 50):
            pp = TransplantParams.shifted(0.0, 0.7, k)
            for (x, y) in ((2.0, 1.0), (1.5, 1.4)):
                fd = (
                    kernel_eval(pp, x + h, y).value - kernel_eval(pp, x - h, y).value
                ) / (2 * h)
                assert kernel_dx(pp, x, y) == pytest.approx(fd, rel=1e-5)


class TestBetaIntegralBound:
    def test_anchor_and_stability(self):
        with Budget(60):
            q = LemmaQuery(0.0, 1.0, -0.5, 1.0, 2.0, 1.0)
            assert lemma_ratio(q) == pytest.approx(0.5, rel=1e-9)
            rep = lemma_bound_scan()
            assert rep.uniformity_ratio <= 3.0
            assert all(math.isfinite(m) for m in rep.measured)


class TestNormUniformity:
    # the two scans share one 15-minute wall-clock budget
    elapsed: list = []

    def test_weighted_scan(self):
        # u = x^{1/4} on the pair (0, 0.7): the per-shift operator-norm
        # lower bounds stay within 1.5x of the k = 0 value
        t0 = time.monotonic()
        rep = norm_scan(0.0, 0.7, range(0, 21),
                        weight=WeightSpec("power", 0.25, 2.0))
        TestNormUniformity.elapsed.append(time.monotonic() - t0)
        assert rep.uniformity_ratio <= 1.5

    def test_isometric_pair_never_expands(self):
        # orders (-1/2, 1/2) with u = 1: every shift is an isometry, so
        # no shift exceeds the k = 0 value and all sit near 1
        t0 = time.monotonic()
        rep = norm_scan(-0.5, 0.5, range(0, 21))
        TestNormUniformity.elapsed.append(time.monotonic() - t0)
        for r in rep.ratios:
            assert r <= 1.0 + 1e-3
        for m in rep.measured:
            assert m == pytest.approx(1.0, abs=0.01)
        total = sum(TestNormUniformity.elapsed)
        assert total < 900, f"scans took {total:.0f}s, budget 900s"


class TestVectorValued:
    def test_equal_entry_family(self):
        from hankelkit.hankel import BumpSpec

        f = BumpSpec(2.0, 0.8).to_function()
        with Budget(300):
            rep = vector_valued_scan(-0.5, 0.5, 2.0, family=[f] * 13, k_max=12)
            assert rep.measured[0] <= 1.0 + 1e-3
            assert rep.measured[0] >= 0.9

    def test_weighted_random_families_stable(self):
        with Budget(300):
            rep = vector_valued_scan(0.0, 0.7, 2.0,
                                     weight=WeightSpec("power", 0.25, 2.0),
                                     k_max=12, draws=3, seed=0)
            assert all(math.isfinite(m) for m in rep.measured)
            assert rep.uniformity_ratio <= 1.5


class TestTransference:
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("d", [1, 2])
    @pytest.mark.parametrize("k", [0, 1, 3])
    def test_smooth_multiplier(self, n, d, k):
        from hankelkit.hankel import BumpSpec

        f = BumpSpec(2.0, 0.8).to_function()
        q = TransferQuery(n, d, k, make_multiplier("lorentz"))
        with Budget(50):
            assert transference_identity_check(q, f) < 1e-3

    def test_identity_multiplier(self):
        from hankelkit.hankel import BumpSpec

        f = BumpSpec(2.0, 0.8).to_function()
        q = TransferQuery(2, 1, 0, make_multiplier("one"))
        with Budget(50):
            assert transference_identity_check(q, f) < 2e-4


class TestWeightCharacteristic:
    def test_at_least_one_everywhere(self):
        for w in weight_bank(2.0):
            assert ap_characteristic(w).value >= 1.0 - 1e-12

    def test_finite_inside_range(self):
        for delta in (-0.9, -0.5, 0.5, 0.9):
            res = ap_characteristic(WeightSpec("power", delta, 2.0))
            assert not res.divergent and math.isfinite(res.value)

    def test_divergent_flagged(self):
        for delta in (-1.5, 1.5):
            assert ap_characteristic(WeightSpec("power", delta, 2.0)).divergent


class TestDeterministicReports:
    def test_verify_reruns_byte_identical(self, tmp_path):
        runner = CliRunner()
        outputs = []
        for name in ("a", "b"):
            p = tmp_path / f"{name}.csv"
            res = runner.invoke(cli_main, ["--seed", "11", "--out", str(p),
                                           "verify", "lemma"])
            assert res.exit_code == 0
            outputs.append(p.read_bytes())
        assert outputs[0] == outputs[1]

        outputs = []
        for name in ("c", "d"):
            p = tmp_path / f"{name}.json"
            res = runner.invoke(cli_main, ["--format", "json", "--out", str(p),
                                           "verify", "radial", "--n", "3"])
            assert res.exit_code == 0
            outputs.append(p.read_bytes())
        assert outputs[0] == outputs[1]
