"""Hankel transforms: self-reciprocal closed forms, involution,
Plancherel, multipliers, and the function/multiplier parsers."""

import math

import numpy as np
import pytest

from hankelkit.hankel import (
    BumpSpec,
    bump_bank,
    hankel_apply,
    hankel_transform,
    make_multiplier,
    multiplier_apply,
    parse_function,
    plancherel_defect,
    transform_stage,
)


class TestClosedForms:
    @pytest.mark.parametrize("nu", [-0.5, 0.0, 1.5, 4.0])
    def test_self_reciprocal_profile(self, nu):
        # H_nu maps y^(nu+1/2) e^(-y^2/2) to itself
        f = parse_function(f"weber:{nu}")
        xs = np.linspace(0.3, 3.0, 9)
        vals = hankel_transform(nu, f, xs)
        ref = xs ** (nu + 0.5) * np.exp(-0.5 * xs**2)
        assert vals == pytest.approx(ref, rel=1e-8)

    def test_sine_kernel_order(self):
        # H_{1/2} is the sine transform: for f = indicator-like smooth bump
        # compare against direct quadrature of sqrt(2/pi) sin(xy) f(y)
        from hankelkit.quadrature import integrate

        f = BumpSpec(2.0, 0.8).to_function()
        x = 1.3
        ref = integrate(
            lambda y: math.sqrt(2.0 / math.pi) * np.sin(x * y) * f(y), 1.2, 2.8,
            1e-12,
        ).value
        assert hankel_transform(0.5, f, [x])[0] == pytest.approx(ref, rel=1e-9)


class TestInvolution:
    def test_double_transform_returns_input(self):
        f = BumpSpec(2.0, 0.8).to_function()
        g = transform_stage(1.0, f, use_freq=8.0, tail_tol=1e-8)
        xs = np.linspace(1.3, 2.7, 21)
        back = hankel_apply(1.0, g, xs)
        assert np.max(np.abs(back - f(xs))) < 1e-6 * np.max(np.abs(f(xs)))

    def test_plancherel(self):
        f = BumpSpec(1.0, 0.4).to_function()
        assert plancherel_defect(2.0, f) < 1e-6


class TestParsers:
    def test_bump_support_and_peak(self):
        f = parse_function("bump:2,0.8")
        assert f.support == (1.2, 2.8)
        assert f(2.0) == pytest.approx(1.0)
        assert f(1.2) == 0.0 and f(3.0) == 0.0

    def test_bank_size_and_names(self):
        bank = bump_bank()
        assert len(bank) == 6
        assert len({f.name for f in bank}) == 6

    def test_unknown_spec_rejected(self):
        with pytest.raises(ValueError):
            parse_function("nope:1")

    def test_multipliers(self):
        one = make_multiplier("one")
        assert one.fn(np.array([0.3, 7.0])) == pytest.approx([1.0, 1.0])
        lor = make_multiplier("lorentz")
        assert lor.fn(2.0) == pytest.approx(0.2)
        box = make_multiplier("box:1,2")
        assert box.fn(np.array([0.5, 1.5, 2.5])) == pytest.approx([0.0, 1.0, 0.0])
        with pytest.raises(ValueError):
            make_multiplier("wiggle")


class TestMultiplierOperator:
    def test_identity_multiplier_is_involution(self):
        f = BumpSpec(2.0, 0.8).to_function()
        xs = np.linspace(1.4, 2.6, 7)
        out = multiplier_apply(0.5, make_multiplier("one"), f, xs, tail_tol=1e-7)
        assert out == pytest.approx(f(xs), rel=1e-5)

    def test_zero_multiplier_annihilates(self):
        f = BumpSpec(2.0, 0.8).to_function()
        out = multiplier_apply(0.5, make_multiplier("zero"), f, np.array([1.7]))
        assert abs(out[0]) < 1e-9

    def test_order_below_minimum_rejected(self):
        f = BumpSpec(2.0, 0.8).to_function()
        with pytest.raises(ValueError):
            hankel_transform(-0.7, f, [1.0])
