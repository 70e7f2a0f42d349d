"""Log-domain evaluation of the singular beta-type integral

    I(gamma, D, lam; A, B) = int_0^1 s^gamma (1-s)^(D-1) (A - B s)^(-(D+lam)) ds

for gamma > -1, D > 0, lam > 0, 0 < B < A.  This one integral family
underlies the stabilized kernel evaluation, the kernel x-derivative, and
the integral-bound sweeps, so it is built once and built carefully:

  * the substitution w = 1 - s moves the steep (1-s)^(D-1) factor to a
    w^(D-1) factor at the origin;
  * the characteristic scale w ~ (A-B)/B and the interior maximum
    w* = (D-1)(A-B)/(B(lam+1)) pick the split point between two
    regions, each mapped by a square-root substitution that removes the
    endpoint singularities;
  * geometrically refined Gauss-Legendre panels resolve the peak, and
    everything is assembled in the log domain with max subtraction, so
    huge exponents (D ~ 100) never overflow.

Returns log(I); vectorized over (A, B).
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import integrate

__all__ = ["beta_kernel_log_integral"]

_ORDER = 12
_LEVELS = 14
_GL = np.polynomial.legendre.leggauss(_ORDER)


def _geometric_panels(levels: int) -> np.ndarray:
    """Breakpoints of [0, 1] refined geometrically toward both ends."""
    left = 0.5 ** np.arange(levels + 1, 0, -1)
    right = 1.0 - 0.5 ** np.arange(2, levels + 2)
    return np.concatenate([[0.0], left, right, [1.0]])


_BREAKS = _geometric_panels(_LEVELS)
# nodes/weights on (0, 1), shape (n_nodes,)
_T_NODES = np.concatenate(
    [
        0.5 * (_BREAKS[i] + _BREAKS[i + 1]) + 0.5 * (_BREAKS[i + 1] - _BREAKS[i]) * _GL[0]
        for i in range(len(_BREAKS) - 1)
    ]
)
_T_WEIGHTS = np.concatenate(
    [0.5 * (_BREAKS[i + 1] - _BREAKS[i]) * _GL[1] for i in range(len(_BREAKS) - 1)]
)


def _logsumexp_weighted(logs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    m = np.max(logs, axis=-1, keepdims=True)
    return np.squeeze(m, axis=-1) + np.log(np.sum(weights * np.exp(logs - m), axis=-1))


def _vectorized_log_integral(gamma, D, lam, A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = A - B
    wt = C / B  # transition scale of (C + B w)
    if D > 1.0:
        wstar = (D - 1.0) * C / (B * (lam + 1.0))
        wc = np.maximum(wstar, np.minimum(wt, 1.0))
    else:
        wc = np.minimum(wt, 1.0)
    wc = np.clip(wc, 1e-6, 1.0 - 1e-3)

    # power substitutions strong enough to flatten w^(D-1) at 0 and
    # (1-w)^gamma at 1 for arbitrarily small D and gamma close to -1
    m1 = max(2.0, math.ceil(2.0 / D))
    m2 = max(2.0, math.ceil(2.0 / (gamma + 1.0)))

    wc_ = wc[..., None]
    A_ = A[..., None]
    B_ = B[..., None]
    C_ = C[..., None]
    v = _T_NODES
    wv = _T_WEIGHTS

    # region 1: w in (0, wc], w = wc v^m1
    log_v = np.log(v)
    log_w1 = np.log(wc_) + m1 * log_v
    w1 = np.exp(log_w1)
    L1 = (
        gamma * np.log1p(-w1)
        + (D - 1.0) * log_w1
        - (D + lam) * np.log(C_ + B_ * w1)
        + np.log(m1 * wc_)
        + (m1 - 1.0) * log_v
    )

    # region 2: w in (wc, 1), 1 - w = (1 - wc) u^m2
    log_omw2 = np.log1p(-wc_) + m2 * log_v
    one_minus_w2 = np.exp(log_omw2)
    w2 = 1.0 - one_minus_w2
    L2 = (
        gamma * log_omw2
        + (D - 1.0) * np.log(w2)
        - (D + lam) * np.log(A_ - B_ * one_minus_w2)
        + np.log(m2 * (1.0 - wc_))
        + (m2 - 1.0) * log_v
    )

    logs = np.concatenate([L1, L2], axis=-1)
    weights = np.concatenate([np.broadcast_to(wv, L1.shape), np.broadcast_to(wv, L2.shape)], axis=-1)
    return _logsumexp_weighted(logs, weights)


def _scalar_log_integral(gamma, D, lam, A, B):
    """Adaptive fallback for extreme D near 0, where the power
    substitution of the vectorized path degenerates."""

    def f(s):
        return np.power(s, gamma) * np.power(A - B * s, -(D + lam))

    res = integrate(
        f if D == 1.0 else (lambda s: f(s) * np.power(1.0 - s, D - 1.0)),
        0.0,
        1.0,
        1e-14,
        left_exponent=gamma if gamma < 0.0 else None,
        right_exponent=(D - 1.0) if D < 1.0 else None,
    )
    if res.value <= 0.0:
        raise ValueError("beta-type integral evaluated non-positive")
    return math.log(res.value)


def beta_kernel_log_integral(gamma: float, D: float, lam: float, A, B):
    """log of int_0^1 s^gamma (1-s)^(D-1) (A-Bs)^(-(D+lam)) ds.

    gamma > -1, D > 0, lam > 0; A, B scalars or arrays with 0 < B < A.
    """
    if not gamma > -1.0:
        raise ValueError(f"require gamma > -1, got {gamma}")
    if not D > 0.0:
        raise ValueError(f"require D > 0, got {D}")
    if not lam > 0.0:
        raise ValueError(f"require lam > 0, got {lam}")
    A_arr = np.asarray(A, dtype=float)
    B_arr = np.asarray(B, dtype=float)
    if np.any(B_arr <= 0.0) or np.any(A_arr <= B_arr):
        raise ValueError("require 0 < B < A")
    if D >= 0.01:
        out = _vectorized_log_integral(gamma, D, lam, A_arr, B_arr)
        return float(out) if np.isscalar(A) and np.isscalar(B) else out
    if np.isscalar(A) and np.isscalar(B):
        return _scalar_log_integral(gamma, D, lam, float(A), float(B))
    flat = [
        _scalar_log_integral(gamma, D, lam, float(a_), float(b_))
        for a_, b_ in zip(A_arr.ravel(), B_arr.ravel())
    ]
    return np.asarray(flat).reshape(A_arr.shape)
