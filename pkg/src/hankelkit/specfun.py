"""Gamma, Bessel J of real order, and the Gauss hypergeometric function.

Gamma, its reciprocal, and Bessel functions are thin contract wrappers
over scipy.special (mature, well past the accuracy targets here).  The
hypergeometric evaluation is local: a truncated Gauss series for
z <= 1/2 and the Euler integral representation

    2F1(p, q; r; z) = Gamma(r) / (Gamma(q) Gamma(r-q))
                      * int_0^1 s^(q-1) (1-s)^(r-q-1) (1-zs)^(-p) ds

for z > 1/2, which needs r > q > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .quadrature import integrate

__all__ = [
    "GAMMA_X_MAX",
    "BESSEL_X_MAX",
    "Hyp2F1Args",
    "Hyp2F1Error",
    "gamma",
    "recip_gamma",
    "bessel_j",
    "hyp2f1",
    "hyp2f1_dz",
]

GAMMA_X_MAX = 171.6  # gamma overflows double precision beyond this
BESSEL_X_MAX = 800.0
BESSEL_NU_MIN = -0.5

_SERIES_MAX_TERMS = 4000


class Hyp2F1Error(ValueError):
    """Parameter-domain violation or non-convergence of 2F1 evaluation."""

    def __init__(self, message: str, achieved_error: float | None = None):
        super().__init__(message)
        self.achieved_error = achieved_error


def gamma(x: float) -> float:
    """Gamma function for positive arguments."""
    if x <= 0.0:
        raise ValueError(f"gamma requires x > 0, got {x}; use recip_gamma for x <= 0")
    if x > GAMMA_X_MAX:
        raise OverflowError(f"gamma({x}) exceeds double range (x > {GAMMA_X_MAX})")
    return float(sp.gamma(x))


def recip_gamma(x: float) -> float:
    """1/Gamma(x) for any real x; exactly 0 at the poles 0, -1, -2, ..."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    return float(sp.rgamma(x))


def bessel_j(nu: float, x: float | np.ndarray) -> float | np.ndarray:
    """Bessel function of the first kind, real order nu >= -1/2."""
    if nu < BESSEL_NU_MIN:
        raise ValueError(f"unsupported order nu={nu} < {BESSEL_NU_MIN}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > BESSEL_X_MAX):
        raise ValueError(f"argument out of supported range (0, {BESSEL_X_MAX}]")
    out = sp.jv(nu, arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


@dataclass(frozen=True)
class Hyp2F1Args:
    """Arguments of 2F1(p, q; r; z) with z restricted to [0, 1)."""

    p: float
    q: float
    r: float
    z: float

    def __post_init__(self):
        if not (0.0 <= self.z < 1.0):
            raise Hyp2F1Error(f"z must be in [0, 1), got {self.z}")
        if self.r <= 0.0 and self.r == math.floor(self.r):
            raise Hyp2F1Error(f"lower parameter r={self.r} is a non-positive integer")

    @property
    def euler_admissible(self) -> bool:
        return self.r > self.q > 0.0 or self.r > self.p > 0.0


def _gauss_series(p, q, r, z, max_terms=_SERIES_MAX_TERMS):
    """Plain series summation; returns (value, last-term magnitude)."""
    term = 1.0
    total = 1.0
    for n in range(max_terms):
        term *= (p + n) * (q + n) / ((r + n) * (1.0 + n)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total, abs(term)
    return total, abs(term)


def _euler_integral(p, q, r, z, tol):
    if not r > q > 0.0:
        p, q = q, p
    if not r > q > 0.0:
        raise Hyp2F1Error(f"Euler path needs r > q > 0, got p={p}, q={q}, r={r}")

    def f(s):
        return (1.0 - z * s) ** (-p)

    def weighted(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        ok = (s > 0.0) & (s < 1.0)
        sv = s[ok]
        out[ok] = np.power(sv, q - 1.0) * np.power(1.0 - sv, r - q - 1.0) * f(sv)
        return out

    res = integrate(
        weighted, 0.0, 1.0, tol,
        left_exponent=(q - 1.0) if q < 1.0 else None,
        right_exponent=(r - q - 1.0) if r - q < 1.0 else None,
    )
    coef = math.exp(sp.gammaln(r) - sp.gammaln(q) - sp.gammaln(r - q))
    return coef * res.value


def hyp2f1(p: float, q: float, r: float, z: float, tol: float = 1e-12) -> float:
    """Gauss hypergeometric function on [0, 1).

    Series for z <= 1/2; Euler integral for z > 1/2 when admissible,
    otherwise an extended series with a convergence check.
    """
    args = Hyp2F1Args(p, q, r, z)
    if z == 0.0:
        return 1.0
    # binomial reductions, exact for all z in [0, 1)
    if r == q:
        return (1.0 - z) ** (-p)
    if r == p:
        return (1.0 - z) ** (-q)
    if z <= 0.5:
        value, last = _gauss_series(p, q, r, z)
        if last > 1e-10 * max(1.0, abs(value)):
            raise Hyp2F1Error(
                f"series did not converge at z={z}", achieved_error=last
            )
        return value
    # the series converges for all z < 1, just slowly near 1; try it with
    # a generous term budget first, integrate only when it stalls
    value, last = _gauss_series(p, q, r, z, max_terms=20 * _SERIES_MAX_TERMS)
    if last <= 1e-15 * max(1.0, abs(value)):
        return value
    if args.euler_admissible:
        # magnitude estimate: value at 1/2 times the (1-z)^(r-p-q)
        # blow-up factor when the function diverges toward z = 1
        scale = abs(_gauss_series(p, q, r, 0.5)[0])
        excess = r - p - q
        if excess < 0.0:
            scale *= (1.0 - z) ** excess
        return _euler_integral(p, q, r, z, tol * max(1.0, scale))
    raise Hyp2F1Error(
        f"no Euler path (need r > q > 0) and series non-convergent at z={z}",
        achieved_error=last,
    )


def hyp2f1_dz(p: float, q: float, r: float, z: float, tol: float = 1e-12) -> float:
    """d/dz of 2F1(p, q; r; z), via the contiguous shift
    (pq/r) 2F1(p+1, q+1; r+1; z)."""
    return p * q / r * hyp2f1(p + 1.0, q + 1.0, r + 1.0, z, tol)


def hyp2f1_series(p: float, q: float, r: float, z: np.ndarray, n_terms: int = 256) -> np.ndarray:
    """Vectorized fixed-length series over an array of z values.

    Internal fast path for kernel evaluation on grids; callers must keep
    z small enough (z <= ~0.8) for the term count to suffice.
    """
    z = np.asarray(z, dtype=float)
    total = np.ones_like(z)
    term = np.ones_like(z)
    for n in range(n_terms):
        term = term * ((p + n) * (q + n) / ((r + n) * (1.0 + n))) * z
        total += term
    return total
