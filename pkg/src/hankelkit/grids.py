"""Composite Gauss-Legendre grids, tabulated pipeline functions, and
inverse-power tail corrections for Bessel-type oscillatory integrals.

Transplanted functions decay like x^(-p) with small p, so truncating
their transforms at the grid end would cost ~1/(x*S) accuracy.  Instead
a grid function carries a fitted inverse-power tail, and transforms of
the tail are evaluated through the cached half-line integrals

    Phi_(nu,q)(T) = int_T^infty J_nu(t) t^(1/2 - q) dt,

tabulated on [T_MIN, T_switch] and continued by the Bessel asymptotic
expansion (integrated by parts) beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp
from scipy.integrate import cumulative_simpson

__all__ = ["Grid", "GridFn", "TailFit", "composite_grid", "fit_tail", "tail_transform"]

_GL16 = np.polynomial.legendre.leggauss(16)
# phase per panel such that order-16 panels integrate oscillations to ~1e-14
_PHASE_PER_PANEL = 8.0


@dataclass(frozen=True)
class Grid:
    """Composite Gauss-Legendre rule on (a, b)."""

    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float
    max_freq: float  # highest oscillation frequency (rad/unit) the rule resolves

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


def composite_grid(
    a: float,
    b: float,
    max_freq: float,
    *,
    breakpoints: tuple[float, ...] = (),
    order: int = 16,
) -> Grid:
    """Composite rule on (a, b) resolving oscillations up to ``max_freq``."""
    if not (a < b):
        raise ValueError(f"require a < b, got ({a}, {b})")
    h = _PHASE_PER_PANEL / max(max_freq, _PHASE_PER_PANEL / (b - a))
    edges = {a, b}
    edges.update(p for p in breakpoints if a < p < b)
    edges = sorted(edges)
    xi, wi = np.polynomial.legendre.leggauss(order) if order != 16 else _GL16
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        n_panels = max(1, math.ceil((hi - lo) / h))
        bounds = np.linspace(lo, hi, n_panels + 1)
        mid = 0.5 * (bounds[:-1] + bounds[1:])
        half = 0.5 * (bounds[1:] - bounds[:-1])
        nodes.append((mid[:, None] + half[:, None] * xi).ravel())
        weights.append((half[:, None] * wi).ravel())
    return Grid(np.concatenate(nodes), np.concatenate(weights), a, b, max_freq)


@dataclass(frozen=True)
class TailFit:
    """Inverse-power model c_0 s^-p0 + c_1 s^-(p0+1) + c_2 s^-(p0+2),
    valid for s >= start."""

    start: float
    exponents: tuple[float, ...]
    coeffs: tuple[float, ...]

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for p, c in zip(self.exponents, self.coeffs):
            out += c * s**-p
        return out


def fit_tail(
    grid: Grid,
    values: np.ndarray,
    p0: float | None = None,
    *,
    window: tuple[float, float] = (0.6, 1.0),
    n_terms: int = 3,
    rel_residual_max: float = 0.05,
) -> TailFit | None:
    """Fit an inverse-power tail on the trailing window of a grid function.

    ``p0`` is the leading decay exponent when known from theory; when
    None it is estimated by log-log regression.  Returns None when the
    data does not look like a smooth power tail (sign changes, noise
    floor, or poor residual).
    """
    s_lo = grid.a + window[0] * (grid.b - grid.a)
    mask = grid.nodes >= s_lo
    s = grid.nodes[mask]
    v = values[mask]
    if len(s) < 4 * n_terms:
        return None
    vmax_all = float(np.max(np.abs(values)))
    if np.max(np.abs(v)) < 1e-13 * max(vmax_all, 1e-300):
        return None  # decayed to noise; no tail needed
    if p0 is None:
        if np.any(v > 0) and np.any(v < 0):
            return None  # oscillatory; inverse powers do not apply
        slope = np.polyfit(np.log(s), np.log(np.abs(v)), 1)[0]
        if slope >= -0.5 or slope < -25.0:
            return None
        p0 = -slope
    basis = np.stack([s ** -(p0 + j) for j in range(n_terms)], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, v, rcond=None)
    resid = v - basis @ coeffs
    if np.max(np.abs(resid)) > rel_residual_max * max(np.max(np.abs(v)), 1e-300):
        return None
    return TailFit(grid.b, tuple(p0 + j for j in range(n_terms)), tuple(coeffs))


@dataclass
class GridFn:
    """Function tabulated on a grid over (0, S) plus an optional tail model."""

    grid: Grid
    values: np.ndarray
    tail: TailFit | None = None

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.interp(s, self.grid.nodes, self.values, left=0.0, right=0.0)
        if self.tail is not None:
            high = s >= self.grid.b
            if np.any(high):
                out = np.where(high, self.tail(np.maximum(s, self.grid.b)), out)
        return out


# --- Bessel tail integrals Phi_(nu,q)(T) -------------------------------

_T_MIN = 1e-3
_TAB_STEP = 0.005


@dataclass
class _PhiTable:
    nu: float
    q: float
    t_switch: float
    ts: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)  # int_T^{t_switch}, tabulated

    def __call__(self, T: np.ndarray) -> np.ndarray:
        T = np.asarray(T, dtype=float)
        out = np.empty_like(T)
        low = T < self.t_switch
        if np.any(low):
            Tc = np.clip(T[low], self.ts[0], self.ts[-1])
            # snap down to the nearest table point, then correct with a
            # local trapezoid using exact integrand values at the query
            idx = np.searchsorted(self.ts, Tc, side="right") - 1
            t0 = self.ts[idx]
            f0 = sp.jv(self.nu, t0) * t0 ** (0.5 - self.q)
            fT = sp.jv(self.nu, Tc) * Tc ** (0.5 - self.q)
            out[low] = (
                self.psi[idx]
                - 0.5 * (Tc - t0) * (f0 + fT)
                + _phi_asymptotic(self.nu, self.q, np.array([self.t_switch]))[0]
            )
        if np.any(~low):
            out[~low] = _phi_asymptotic(self.nu, self.q, T[~low])
        return out


def _phi_asymptotic(nu: float, q: float, T: np.ndarray) -> np.ndarray:
    """int_T^infty J_nu(t) t^(1/2-q) dt by the large-argument expansion of
    J_nu and repeated integration by parts; valid for T >> nu^2."""
    theta = nu * math.pi / 2.0 + math.pi / 4.0
    mu = 4.0 * nu * nu

    # E_c(r,T)=int_T^inf cos(t-theta) t^-r dt, E_s likewise, by recursion
    def E(r, T, depth=6):
        if depth == 0:
            return np.zeros_like(T), np.zeros_like(T)
        ec1, es1 = E(r + 1.0, T, depth - 1)
        ec = -np.sin(T - theta) * T**-r + r * es1
        es = np.cos(T - theta) * T**-r - r * ec1
        return ec, es

    ec_q, es_q = E(q, T)
    ec_q2, _ = E(q + 2.0, T)
    _, es_q1 = E(q + 1.0, T)
    p2 = (mu - 1.0) * (mu - 9.0) / 128.0
    q1 = (mu - 1.0) / 8.0
    return math.sqrt(2.0 / math.pi) * (ec_q - p2 * ec_q2 - q1 * es_q1)


_PHI_CACHE: dict[tuple[float, float], _PhiTable] = {}


def _phi_table(nu: float, q: float) -> _PhiTable:
    key = (round(nu, 12), round(q, 12))
    table = _PHI_CACHE.get(key)
    if table is None:
        t_switch = max(400.0, 4.0 * nu * nu + 400.0)
        ts = np.arange(_T_MIN, t_switch + _TAB_STEP, _TAB_STEP)
        integrand = sp.jv(nu, ts) * ts ** (0.5 - q)
        psi = cumulative_simpson(integrand, x=ts, initial=0.0)
        psi = psi[-1] - psi
        table = _PhiTable(nu, q, float(ts[-1]), ts, psi)
        _PHI_CACHE[key] = table
    return table


def tail_transform(nu: float, tail: TailFit, x: np.ndarray) -> np.ndarray:
    """int_start^infty tail(s) J_nu(x s) (x s)^(1/2) ds for each x > 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    T = x * tail.start
    for p, c in zip(tail.exponents, tail.coeffs):
        if c == 0.0:
            continue
        out += c * x ** (p - 1.0) * _phi_table(nu, p)(T)
    return out
