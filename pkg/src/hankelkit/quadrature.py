"""Adaptive integration on finite intervals, half-line integrals, and
principal-value integrals with a simple pole.

The base rule is a nested Gauss-Legendre pair (7 and 15 points) with
interval bisection driven by local error estimates.  Algebraic endpoint
singularities are handled by a caller-declared power substitution; they
are never detected automatically.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadResult",
    "QuadratureError",
    "integrate",
    "integrate_halfline",
    "principal_value",
    "integrate_log",
]

DEFAULT_BUDGET = 200_000

_GL7 = np.polynomial.legendre.leggauss(7)
_GL15 = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadResult:
    """Value, error estimate, and evaluation count of one integration."""

    value: float
    error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    """Non-convergence within the evaluation budget.

    Carries the best estimate computed so far in ``result``.
    """

    def __init__(self, message: str, result: QuadResult | None = None):
        super().__init__(message)
        self.result = result


def _panel(f, a, b):
    """15/7 point Gauss-Legendre pair on (a, b): (value, error, evals)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x15 = mid + half * _GL15[0]
    y15 = np.asarray(f(x15), dtype=float)
    v15 = half * float(_GL15[1] @ y15)
    x7 = mid + half * _GL7[0]
    y7 = np.asarray(f(x7), dtype=float)
    v7 = half * float(_GL7[1] @ y7)
    return v15, abs(v15 - v7), 22


def _adaptive(f, a, b, tol, budget):
    v, e, n = _panel(f, a, b)
    heap = [(-e, a, b, v, e)]
    total_v, total_e = v, e
    while total_e > tol and n < budget:
        neg_e, lo, hi, pv, pe = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # interval exhausted at machine precision; keep its estimate
            heapq.heappush(heap, (0.0, lo, hi, pv, pe))
            total_e = sum(item[4] for item in heap)
            if all(item[0] == 0.0 for item in heap):
                break
            continue
        v1, e1, n1 = _panel(f, lo, mid)
        v2, e2, n2 = _panel(f, mid, hi)
        n += n1 + n2
        total_v += v1 + v2 - pv
        total_e += e1 + e2 - pe
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
    return total_v, total_e, n


def _substituted(f, a, b, left_exponent, right_exponent):
    """Rewrite the integrand so declared algebraic endpoint singularities
    become smooth; returns a list of (g, lo, hi) pieces."""
    pieces = []
    mid = 0.5 * (a + b) if (left_exponent is not None and right_exponent is not None) else None

    def power_sub(g, lo, hi, exponent, at_left):
        # integrand ~ (x - lo)^exponent (or (hi - x)^exponent); substitute
        # x = lo + t**m with m(1 + exponent) - 1 >= 1 so the new integrand
        # is at least continuous with bounded derivative
        m = max(2.0, math.ceil(2.0 / (1.0 + exponent)))
        width = hi - lo

        if at_left:
            def g_sub(t):
                return g(lo + t**m) * m * t ** (m - 1.0)
        else:
            def g_sub(t):
                return g(hi - t**m) * m * t ** (m - 1.0)

        return g_sub, 0.0, width ** (1.0 / m)

    if left_exponent is not None and right_exponent is not None:
        pieces.append(power_sub(f, a, mid, left_exponent, True))
        pieces.append(power_sub(f, mid, b, right_exponent, False))
    elif left_exponent is not None:
        pieces.append(power_sub(f, a, b, left_exponent, True))
    elif right_exponent is not None:
        pieces.append(power_sub(f, a, b, right_exponent, False))
    else:
        pieces.append((f, a, b))
    return pieces


def integrate(
    f,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    left_exponent: float | None = None,
    right_exponent: float | None = None,
    budget: int = DEFAULT_BUDGET,
) -> QuadResult:
    """Integrate ``f`` over (a, b) to absolute tolerance ``tol``.

    ``f`` must accept numpy arrays.  ``left_exponent``/``right_exponent``
    declare algebraic singularities f ~ (x-a)^gamma (resp. (b-x)^gamma)
    with gamma > -1.
    """
    if not (a < b):
        raise ValueError(f"require a < b, got ({a}, {b})")
    pieces = _substituted(f, a, b, left_exponent, right_exponent)
    value = err = 0.0
    evals = 0
    for g, lo, hi in pieces:
        v, e, n = _adaptive(g, lo, hi, tol / len(pieces), budget // len(pieces))
        value += v
        err += e
        evals += n
    if err > max(tol * 4.0, 1e-13 * abs(value)) and evals >= budget:
        raise QuadratureError(
            f"integration did not converge: error estimate {err:.3e} > tol {tol:.3e}",
            QuadResult(value, err, evals),
        )
    return QuadResult(value, err, evals)


def integrate_halfline(
    f,
    decay_hint: str | tuple[str, float] = "rapid",
    tol: float = 1e-9,
    *,
    budget: int = DEFAULT_BUDGET,
    max_windows: int = 64,
) -> QuadResult:
    """Integrate ``f`` over (0, infinity) by adaptive truncation.

    The upper limit is extended in doubling windows until the last window
    contributes less than tol/4.  ``decay_hint`` is "rapid" or
    ("algebraic", rate); an algebraic hint widens the stall check since
    window contributions then shrink slowly.
    """
    r0 = integrate(f, 0.0, 1.0, tol / 4.0, budget=budget)
    value, err, evals = r0.value, r0.error_estimate, r0.evaluations
    lo, hi = 1.0, 2.0
    last = math.inf
    stall_factor = 0.999 if decay_hint == "rapid" else 1.0 + 1e-12
    stalls = 0
    for _ in range(max_windows):
        r = integrate(f, lo, hi, tol / 8.0, budget=budget)
        value += r.value
        err += r.error_estimate
        evals += r.evaluations
        contrib = abs(r.value)
        if contrib < tol / 4.0:
            return QuadResult(value, err + contrib, evals)
        if contrib > last * stall_factor:
            stalls += 1
            if stalls >= 3:
                raise QuadratureError(
                    "half-line truncation failed: window contributions not decreasing",
                    QuadResult(value, err + contrib, evals),
                )
        else:
            stalls = 0
        last = contrib
        lo, hi = hi, 2.0 * hi
    raise QuadratureError(
        "half-line truncation failed: window budget exhausted",
        QuadResult(value, err + last, evals),
    )


def principal_value(
    f,
    pole: float,
    a: float,
    b: float,
    tol: float = 1e-9,
    *,
    eps0: float | None = None,
    budget: int = DEFAULT_BUDGET,
) -> QuadResult:
    """Principal-value integral of ``f`` over (a, b) with a simple pole.

    Requires (y - pole) * f(y) to extend continuously across the pole.
    Uses symmetric excision at eps plus the symmetrized near-pole
    integral of f(pole+t) + f(pole-t), extrapolated over eps, eps/2,
    eps/4.
    """
    if not (a < pole < b):
        raise ValueError(f"pole {pole} outside ({a}, {b})")
    if eps0 is None:
        eps0 = (b - a) / 64.0
    eps0 = min(eps0, 0.5 * (pole - a), 0.5 * (b - pole))

    # below t_floor the two branches cancel to rounding noise; the
    # symmetrized sum is continuous at t = 0, so clamping is harmless
    t_floor = max(1e-7 * eps0, 1e-5 * abs(pole))

    def sym(t):
        t = np.maximum(np.asarray(t, dtype=float), t_floor)
        return f(pole + t) + f(pole - t)

    estimates = []
    evals = 0
    for eps in (eps0, eps0 / 2.0, eps0 / 4.0):
        parts = [
            integrate(f, a, pole - eps, tol / 3.0, budget=budget),
            integrate(f, pole + eps, b, tol / 3.0, budget=budget),
            integrate(sym, 0.0, eps, tol / 3.0, budget=budget),
        ]
        estimates.append(sum(p.value for p in parts))
        evals += sum(p.evaluations for p in parts)

    # the symmetrized split is eps-independent in exact arithmetic; the
    # spread across excision radii measures the residual numerical error
    spread = max(estimates) - min(estimates)
    value = estimates[-1]
    if spread > max(100.0 * tol, 1e-8 * max(1.0, abs(value))):
        raise QuadratureError(
            f"principal-value extrapolation non-convergent: spread {spread:.3e}",
            QuadResult(value, spread, evals),
        )
    return QuadResult(value, max(spread, tol), evals)


def integrate_log(
    log_f,
    a: float,
    b: float,
    tol: float = 1e-12,
    *,
    left_exponent: float | None = None,
    right_exponent: float | None = None,
    probe_points: int = 65,
    budget: int = DEFAULT_BUDGET,
) -> tuple[float, int]:
    """Integrate exp(log_f) over (a, b) in the log domain.

    Returns (log of the integral, evaluations).  ``tol`` is relative to
    the integral's magnitude.  Endpoint exponents refer to the algebraic
    factors of exp(log_f) itself.
    """
    probes = np.linspace(a, b, probe_points)[1:-1]
    lf = np.asarray(log_f(probes), dtype=float)
    shift = float(np.max(lf))
    if not math.isfinite(shift):
        raise ValueError("log-integrand not finite on probe grid")

    def g(x):
        return np.exp(np.asarray(log_f(x), dtype=float) - shift)

    rough = float(np.mean(np.exp(lf - shift))) * (b - a)
    r = integrate(
        g, a, b, max(tol * rough, 5e-324),
        left_exponent=left_exponent, right_exponent=right_exponent, budget=budget,
    )
    if r.value <= 0.0:
        raise QuadratureError("log-domain integral is non-positive", r)
    return shift + math.log(r.value), r.evaluations + probe_points - 2
