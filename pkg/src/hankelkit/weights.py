"""Muckenhoupt A_p weights on (0, infinity): characteristic estimation
over finite interval families, weighted L^p norms, and a standard bank.

The characteristic of a weight u over an interval (a, b) is

    M(a, b) = (avg of u) * (avg of u^(-q/p))^(p/q),

and the A_p condition asks for a uniform bound over all intervals.  The
estimator evaluates M over a finite dyadic family plus shrinking
origin-touching intervals (eps, b); a growing eps-trend is the signature
of non-integrability at 0 and raises the divergent flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grids import GridFn
from .hankel import SampledFunction, _source_grid
from .quadrature import integrate

__all__ = [
    "WeightSpec",
    "NormQuery",
    "ApResult",
    "ap_characteristic",
    "weighted_lp_norm",
    "weight_bank",
    "parse_weight",
    "dyadic_family",
]

AP_CEILING = 1e8
# origin intervals are evaluated at (eps, b) for this shrinking eps set;
# three decades per step separates slow convergence near the A_p
# boundary from genuine power-law divergence
ORIGIN_EPS_SET = (1e-6, 1e-9, 1e-12)
# minimal per-step growth of the origin expression that counts as divergence
_TREND_FACTOR = 1.5


@dataclass(frozen=True)
class WeightSpec:
    """Weight u on (0, infinity) paired with the exponent p.

    kind "power" is u(x) = x^delta; "piecewise" is u(x) = min(1, x)^delta;
    "tabulated" interpolates (xs, vals) linearly and continues constantly.
    """

    kind: str = "power"
    delta: float = 0.0
    p: float = 2.0
    xs: tuple[float, ...] = ()
    vals: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("power", "piecewise", "tabulated"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not 1.0 < self.p < math.inf:
            raise ValueError(f"exponent p must lie in (1, inf), got {self.p}")
        if self.kind == "tabulated":
            if len(self.xs) < 2 or len(self.xs) != len(self.vals):
                raise ValueError("tabulated weight needs matching xs/vals, length >= 2")
            if any(v < 0.0 for v in self.vals):
                raise ValueError("weight values must be nonnegative")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def name(self) -> str:
        if self.kind == "power":
            return f"pow:{self.delta:g}"
        if self.kind == "piecewise":
            return f"minpow:{self.delta:g}"
        return "tabulated"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "power":
            return x**self.delta
        if self.kind == "piecewise":
            return np.minimum(1.0, x) ** self.delta
        return np.interp(x, self.xs, self.vals)

    # exact interval integrals of u^r for the analytic kinds
    def _power_piece(self, r: float, a: float, b: float) -> float:
        c = self.delta * r
        if abs(c + 1.0) < 1e-12:
            return math.log(b / a)
        return (b ** (c + 1.0) - a ** (c + 1.0)) / (c + 1.0)

    def integral_of_power(self, r: float, a: float, b: float) -> float:
        """int_a^b u(x)^r dx, 0 < a < b."""
        if not 0.0 < a < b:
            raise ValueError(f"need 0 < a < b, got ({a}, {b})")
        if self.kind == "power":
            return self._power_piece(r, a, b)
        if self.kind == "piecewise":
            if b <= 1.0:
                return self._power_piece(r, a, b)
            if a >= 1.0:
                return b - a
            return self._power_piece(r, a, 1.0) + (b - 1.0)
        fn = lambda x: self(x) ** r
        return integrate(fn, a, b, 1e-11).value


@dataclass(frozen=True)
class NormQuery:
    """A function paired with the weight of the norm to take."""

    f: object
    weight: WeightSpec


@dataclass(frozen=True)
class ApResult:
    value: float
    divergent: bool
    rows: tuple[dict, ...] = field(repr=False, default=())


def dyadic_family(j_min: int = -8, j_max: int = 8) -> list[tuple[float, float]]:
    """All intervals (2^i, 2^j) with j_min <= i < j <= j_max, plus the
    origin-touching intervals (0, 2^j)."""
    js = list(range(j_min, j_max + 1))
    fam = [(2.0**i, 2.0**j) for i in js for j in js if i < j]
    fam.extend((0.0, 2.0**j) for j in js)
    return fam


def _interval_expression(w: WeightSpec, a: float, b: float) -> float:
    length = b - a
    avg_u = w.integral_of_power(1.0, a, b) / length
    avg_dual = w.integral_of_power(-w.q / w.p, a, b) / length
    return avg_u * avg_dual ** (w.p / w.q)


def ap_characteristic(
    w: WeightSpec,
    family: list[tuple[float, float]] | None = None,
    *,
    ceiling: float = AP_CEILING,
    origin_eps: tuple[float, ...] = ORIGIN_EPS_SET,
) -> ApResult:
    """Max of the A_p expression over the family; a lower bound for the
    true characteristic.  Intervals with left endpoint 0 are evaluated at
    shrinking eps-left-endpoints, and a steadily growing trend (or any
    value beyond the ceiling, or a non-finite value) flags divergence.
    """
    if family is None:
        family = dyadic_family()
    best = 0.0
    divergent = False
    rows = []
    for a, b in family:
        if a == 0.0:
            eps_sorted = sorted(origin_eps, reverse=True)  # shrinking
            vals = []
            for eps in eps_sorted:
                try:
                    vals.append(_interval_expression(w, eps, b))
                except (OverflowError, ValueError):
                    vals.append(math.inf)
            growing = all(
                v2 > _TREND_FACTOR * v1 for v1, v2 in zip(vals, vals[1:])
            )
            if growing or not all(math.isfinite(v) for v in vals):
                divergent = True
            value = vals[0]
            rows.append(
                {"a": a, "b": b, "value": value, "eps_trend": tuple(vals)}
            )
        else:
            try:
                value = _interval_expression(w, a, b)
            except (OverflowError, ValueError):
                value = math.inf
            rows.append({"a": a, "b": b, "value": value})
        if not math.isfinite(value) or value > ceiling:
            divergent = True
        best = max(best, value)
    return ApResult(best, divergent, tuple(rows))


def _tail_norm_power(tail, p: float, w: WeightSpec) -> float:
    """int_start^infty |tail(s)|^p u(s) ds via the substitution s = start/t."""
    start = tail.start
    lead = min(tail.exponents)
    delta = w.delta if w.kind == "power" else 0.0
    if p * lead - delta <= 1.0:
        raise ValueError("weighted tail integral does not converge")

    def g(t):
        t = np.asarray(t, dtype=float)
        s = start / t
        return np.abs(tail(s)) ** p * np.asarray(w(s), dtype=float) * start / t**2

    return integrate(g, 0.0, 1.0, 1e-13, left_exponent=p * lead - delta - 2.0).value


def weighted_lp_norm(query: NormQuery) -> float:
    """(int |f|^p u dx)^(1/p) over the support of f."""
    f, w = query.f, query.weight
    p = w.p
    if isinstance(f, GridFn):
        u = np.asarray(w(f.grid.nodes), dtype=float)
        total = f.grid.integrate(np.abs(f.values) ** p * u)
        if f.tail is not None:
            total += _tail_norm_power(f.tail, p, w)
        return total ** (1.0 / p)
    if isinstance(f, SampledFunction):
        grid = _source_grid(f, 0.0)
        vals = np.abs(np.asarray(f(grid.nodes), dtype=float)) ** p
        u = np.asarray(w(grid.nodes), dtype=float)
        return grid.integrate(vals * u) ** (1.0 / p)
    raise TypeError(f"unsupported function type {type(f).__name__}")


def parse_weight(text: str, p: float = 2.0) -> WeightSpec:
    """Parse 'pow:DELTA', 'minpow:DELTA', or 'one'."""
    if text in ("one", "1"):
        return WeightSpec("power", 0.0, p)
    kind, _, arg = text.partition(":")
    if kind == "pow":
        return WeightSpec("power", float(arg), p)
    if kind == "minpow":
        return WeightSpec("piecewise", float(arg), p)
    raise ValueError(f"unknown weight spec {text!r}")


def weight_bank(p: float = 2.0) -> list[WeightSpec]:
    """Default bank: x^delta for delta in {-0.5,...,0.5} and min(1,x)^(1/2)."""
    bank = [WeightSpec("power", d, p) for d in (-0.5, -0.25, 0.0, 0.25, 0.5)]
    bank.append(WeightSpec("piecewise", 0.5, p))
    return bank
