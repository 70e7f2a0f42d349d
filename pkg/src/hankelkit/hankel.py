"""The Hankel transform H_nu f(x) = int_0^inf f(y) J_nu(xy) (xy)^(1/2) dy,
its Plancherel defect, and Hankel multiplier operators m -> H_nu(m * H_nu f).

Two evaluation layers:

  * hankel_transform / hankel_apply give pointwise values by quadrature;
  * transform_stage tabulates a transform on a composite grid over (0, S)
    for reuse as the source of the next transform in a pipeline, with
    adaptive truncation (rapidly decaying transforms) or a fitted
    inverse-power tail (slowly decaying ones).

Grid functions record the highest oscillation frequency their grid
resolves; using one as a quadrature rule beyond that frequency raises
instead of silently losing digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as sp
from scipy.interpolate import CubicSpline

from .grids import (
    _PHASE_PER_PANEL,
    Grid,
    GridFn,
    TailFit,
    composite_grid,
    fit_tail,
    tail_transform,
)
from .quadrature import integrate_halfline

__all__ = [
    "SampledFunction",
    "BumpSpec",
    "MultiplierSpec",
    "bump_bank",
    "make_multiplier",
    "parse_function",
    "hankel_transform",
    "hankel_apply",
    "transform_stage",
    "plancherel_defect",
    "multiplier_apply",
    "multiplier_gridfn",
]

NU_MIN = -0.5


@dataclass(frozen=True)
class SampledFunction:
    """A function on (0, inf) given by a rule, with declared support.

    ``scale`` is the smallest feature length; quadrature grids over the
    support are refined to resolve it.
    """

    rule: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]
    name: str = ""
    scale: float = 0.0

    def __post_init__(self):
        lo, hi = self.support
        if not (0.0 <= lo < hi):
            raise ValueError(f"bad support {self.support}")
        if self.scale <= 0.0:
            width = (hi - lo) if math.isfinite(hi) else 8.0
            object.__setattr__(self, "scale", width / 8.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x > lo) & (x < hi)
        out = np.zeros_like(x)
        if np.any(inside):
            out[inside] = self.rule(x[inside])
        return out

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.support[1])

    @staticmethod
    def from_samples(grid, values, name: str = "") -> "SampledFunction":
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or np.any(np.diff(grid) <= 0.0) or grid[0] <= 0.0:
            raise ValueError("grid must be ascending positive reals")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample values must be finite")
        spline = CubicSpline(grid, values)
        scale = 4.0 * float(np.median(np.diff(grid)))
        return SampledFunction(spline, (float(grid[0]), float(grid[-1])), name, scale)


@dataclass(frozen=True)
class BumpSpec:
    """Smooth compactly supported bump on (center-radius, center+radius),
    b(x) = exp(1 - 1/(1 - ((x-center)/radius)^2)), peak value 1."""

    center: float
    radius: float

    def __post_init__(self):
        if not 0.0 < self.radius < self.center:
            raise ValueError(f"need 0 < radius < center, got {self}")

    def rule(self, x):
        u2 = ((np.asarray(x, dtype=float) - self.center) / self.radius) ** 2
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(u2 < 1.0, np.exp(1.0 - 1.0 / np.maximum(1.0 - u2, 1e-300)), 0.0)

    def to_function(self) -> SampledFunction:
        c, r = self.center, self.radius
        return SampledFunction(self.rule, (c - r, c + r), f"bump:{c:g},{r:g}", scale=r / 2.0)


def bump_bank(
    centers: tuple[float, ...] = (1.0, 2.0, 4.0),
    radius_factors: tuple[float, ...] = (0.4, 0.9),
) -> list[SampledFunction]:
    """Default test bank of smooth bumps spanning narrow and wide supports."""
    return [BumpSpec(c, rf * c).to_function() for c in centers for rf in radius_factors]


@dataclass(frozen=True)
class MultiplierSpec:
    """A bounded function m on (0, inf) acting on the transform side.

    ``breakpoints`` are discontinuities that quadrature panels must align
    with; ``support_hi`` is finite when m vanishes beyond it;
    ``limit_at_inf`` is the constant m approaches at infinity.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    name: str
    sup_bound: float
    breakpoints: tuple[float, ...] = ()
    support_hi: float = math.inf
    limit_at_inf: float = 0.0


def make_multiplier(name: str) -> MultiplierSpec:
    """Build a multiplier from its identifier: one, zero, lorentz,
    or box:LO,HI (sharp cutoff indicator)."""
    if name == "one":
        return MultiplierSpec(lambda s: np.ones_like(np.asarray(s, float)), "one", 1.0,
                              limit_at_inf=1.0)
    if name == "zero":
        return MultiplierSpec(lambda s: np.zeros_like(np.asarray(s, float)), "zero", 0.0,
                              support_hi=0.0)
    if name == "lorentz":
        return MultiplierSpec(lambda s: 1.0 / (1.0 + np.asarray(s, float) ** 2),
                              "lorentz", 1.0)
    if name.startswith("box:"):
        lo, hi = (float(t) for t in name[4:].split(","))
        if not 0.0 <= lo < hi:
            raise ValueError(f"bad box multiplier bounds {name}")

        def box(s):
            s = np.asarray(s, dtype=float)
            return np.where((s >= lo) & (s <= hi), 1.0, 0.0)

        return MultiplierSpec(box, name, 1.0, breakpoints=(lo, hi), support_hi=hi)
    raise ValueError(f"unknown multiplier {name!r}")


def parse_function(spec: str) -> SampledFunction:
    """Parse a function descriptor: bump:C,R or weber:NU
    (the self-reciprocal profile y^(nu+1/2) e^(-y^2/2))."""
    if spec.startswith("bump:"):
        c, r = (float(t) for t in spec[5:].split(","))
        return BumpSpec(c, r).to_function()
    if spec.startswith("weber:"):
        nu = float(spec[6:])
        if nu < NU_MIN:
            raise ValueError(f"order {nu} below {NU_MIN}")
        return SampledFunction(
            lambda y: y ** (nu + 0.5) * np.exp(-0.5 * y**2),
            (0.0, math.inf), spec, scale=1.0,
        )
    raise ValueError(f"unknown function descriptor {spec!r}")


# --- transform evaluation ----------------------------------------------

_JV_BLOCK = 4_000_000  # cap on jv matrix entries per block


def _kernel_dot(nu: float, x: np.ndarray, nodes: np.ndarray, wv: np.ndarray) -> np.ndarray:
    """sum_j J_nu(x_i s_j) (x_i s_j)^(1/2) wv_j, blocked over rows of x."""
    out = np.empty(x.shape, dtype=float)
    rows = max(1, _JV_BLOCK // max(len(nodes), 1))
    for i in range(0, len(x), rows):
        arg = x[i : i + rows, None] * nodes[None, :]
        out[i : i + rows] = (sp.jv(nu, arg) * np.sqrt(arg)) @ wv
    return out


def _source_grid(f: SampledFunction, max_freq: float) -> Grid:
    lo, hi = f.support
    return composite_grid(lo, hi, max(max_freq, _PHASE_PER_PANEL / f.scale))


def hankel_apply(nu: float, src, x) -> np.ndarray | float:
    """H_nu applied to a SampledFunction or a tabulated GridFn at x > 0."""
    if nu < NU_MIN:
        raise ValueError(f"order {nu} below {NU_MIN}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0.0):
        raise ValueError("evaluation points must be positive")
    if isinstance(src, GridFn):
        if float(xs.max()) > src.grid.max_freq * (1.0 + 1e-9):
            raise ValueError(
                f"grid function resolves frequencies up to {src.grid.max_freq}, "
                f"requested x up to {xs.max()}"
            )
        out = _kernel_dot(nu, xs, src.grid.nodes, src.grid.weights * src.values)
        if src.tail is not None:
            out = out + tail_transform(nu, src.tail, xs)
    elif isinstance(src, SampledFunction) and src.bounded:
        g = _source_grid(src, float(xs.max()))
        out = _kernel_dot(nu, xs, g.nodes, g.weights * src(g.nodes))
    elif isinstance(src, SampledFunction):
        out = np.array(
            [
                integrate_halfline(
                    lambda y, xi=xi: src(y) * sp.jv(nu, xi * y) * np.sqrt(xi * y),
                    tol=1e-11,
                ).value
                for xi in xs
            ]
        )
    else:
        raise TypeError(f"unsupported source type {type(src).__name__}")
    return float(out[0]) if np.isscalar(x) or np.asarray(x).ndim == 0 else out


def hankel_transform(nu: float, f: SampledFunction, x_points) -> np.ndarray:
    """H_nu f at each requested point."""
    return hankel_apply(nu, f, np.asarray(x_points, dtype=float))


def transform_stage(
    nu: float,
    src,
    *,
    use_freq: float,
    tail_tol: float = 1e-8,
    s_max: float = 1500.0,
    chunk: float = 24.0,
    tail_exponent: float | None = None,
    fit: bool = True,
    breakpoints: tuple[float, ...] = (),
    fine_freq: float | None = None,
    fine_until: float = 0.0,
) -> GridFn:
    """Tabulate H_nu(src) on (0, S) for reuse in later transforms.

    ``use_freq`` is the highest frequency later integrations against the
    result will carry (their x arguments and the content of src itself).
    The grid extends in chunks until the last chunk's peak drops below
    tail_tol relative to the running maximum, or until s_max; in the
    latter case an inverse-power tail is fitted (leading exponent
    ``tail_exponent`` when known).  ``fine_freq``/``fine_until`` refine
    the panels near the origin, where later integrands may have sharper
    features than ``use_freq`` implies.
    """
    grids: list[Grid] = []
    vals: list[np.ndarray] = []
    vmax = 0.0
    lo = 0.0
    hi = 0.0
    truncated_clean = False
    while lo < s_max - 1e-12:
        hi = min(lo + chunk, s_max)
        freq = use_freq
        if fine_freq is not None and lo < fine_until:
            freq = max(use_freq, fine_freq)
        g = composite_grid(lo, hi, freq,
                           breakpoints=tuple(b for b in breakpoints if lo < b < hi))
        v = np.asarray(hankel_apply(nu, src, g.nodes), dtype=float)
        grids.append(g)
        vals.append(v)
        cmax = float(np.max(np.abs(v)))
        vmax = max(vmax, cmax)
        if hi >= min(2.0 * chunk, s_max) and cmax < tail_tol * vmax:
            truncated_clean = True
            break
        lo = hi
    nodes = np.concatenate([g.nodes for g in grids])
    weights = np.concatenate([g.weights for g in grids])
    values = np.concatenate(vals)
    grid = Grid(nodes, weights, 0.0, hi, use_freq)
    tail = None
    if fit and not truncated_clean:
        tail = fit_tail(grid, values, tail_exponent)
    return GridFn(grid, values, tail)


def plancherel_defect(nu: float, f: SampledFunction) -> float:
    """| ||H_nu f||_2 - ||f||_2 | / ||f||_2 with L2 norms by quadrature."""
    if f.bounded:
        gq = _source_grid(f, 0.0)
        norm_f = math.sqrt(gq.integrate(f(gq.nodes) ** 2))
        content = f.support[1]
    else:
        norm_f = math.sqrt(integrate_halfline(lambda y: f(y) ** 2, tol=1e-12).value)
        content = 8.0
    # the squared transform oscillates at twice the content frequency
    g = transform_stage(nu, f, use_freq=max(16.0, 2.0 * content), tail_tol=1e-9, fit=False)
    norm_t = math.sqrt(g.grid.integrate(g.values**2))
    return abs(norm_t - norm_f) / norm_f


def _apply_multiplier(m: MultiplierSpec, g: GridFn) -> GridFn:
    values = g.values * m.fn(g.grid.nodes)
    tail = None
    if g.tail is not None and math.isinf(m.support_hi) and m.limit_at_inf != 0.0:
        tail = TailFit(g.tail.start, g.tail.exponents,
                       tuple(c * m.limit_at_inf for c in g.tail.coeffs))
    return GridFn(g.grid, values, tail)


def multiplier_apply(
    ell: float,
    m: MultiplierSpec,
    f,
    x_points,
    *,
    tail_tol: float = 1e-8,
    s_max: float = 1500.0,
) -> np.ndarray:
    """H_ell( m * H_ell f ) at x_points; f is a SampledFunction or GridFn."""
    xs = np.asarray(x_points, dtype=float)
    cap = min(s_max, m.support_hi)
    if cap <= 0.0:
        return np.zeros_like(np.atleast_1d(xs))
    g = transform_stage(ell, f, use_freq=float(np.max(xs)), tail_tol=tail_tol,
                        s_max=cap, breakpoints=m.breakpoints)
    return hankel_apply(ell, _apply_multiplier(m, g), xs)


def multiplier_gridfn(
    ell: float,
    m: MultiplierSpec,
    f,
    *,
    out_freq: float,
    out_s_max: float,
    tail_tol: float = 1e-8,
    inner_s_max: float = 1500.0,
    tail_exponent: float | None = None,
) -> GridFn:
    """The multiplier operator's output tabulated for further pipeline use."""
    cap = min(inner_s_max, m.support_hi)
    if cap <= 0.0:
        grid = composite_grid(0.0, out_s_max, out_freq)
        return GridFn(grid, np.zeros(len(grid)))
    g = transform_stage(ell, f, use_freq=out_s_max, tail_tol=tail_tol,
                        s_max=cap, breakpoints=m.breakpoints)
    return transform_stage(ell, _apply_multiplier(m, g), use_freq=out_freq,
                           s_max=out_s_max, tail_tol=tail_tol,
                           tail_exponent=tail_exponent)
