"""Transplantation between Hankel transforms of different orders.

The operator T(alpha -> beta) = H_beta o H_alpha is computed two ways:

  * composition: H_alpha f tabulated on a grid, then H_beta applied;
  * explicit kernel: a principal-value integral against the singular
    kernel K(x, y) plus cos((beta-alpha) pi/2) f(x).

The kernel itself has two independent evaluation paths.  The direct
path multiplies a gamma-function coefficient by a Gauss hypergeometric
value in z = (y/x)^2 (below the diagonal; the above-diagonal branch is
the same display with (alpha, beta, x, y) -> (beta, alpha, y, x)).  For
large common shifts k the hypergeometric parameters grow with k, so the
stabilized path rewrites the kernel through the beta-type integral

    K(x,y) = (alpha+beta) / (G((beta-alpha)/2) G((alpha-beta+2)/2))
             * x^(beta+1/2) y^(alpha+1/2)
             * int_0^1 s^((alpha-beta)/2) (1-s)^(D-1) (x^2-y^2 s)^(-(D+1)) ds

with D = (alpha+beta)/2, evaluated fully in the log domain, which stays
well-conditioned for shifts in the hundreds.  The x-derivative uses the
analogous pair of beta-type integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .betaint import beta_kernel_log_integral
from .grids import GridFn, TailFit
from .hankel import SampledFunction, hankel_apply, transform_stage
from .quadrature import integrate, principal_value
from .specfun import gamma as gamma_fn
from .specfun import hyp2f1, hyp2f1_dz, recip_gamma

__all__ = [
    "TransplantParams",
    "KernelValue",
    "kernel_eval",
    "kernel_profile",
    "kernel_dx",
    "transplant_composition",
    "transplant_gridfn",
    "transplant_kernel_form",
    "chain_decompose",
]

ORDER_MIN = -0.5
STABILIZED_SHIFT = 10  # direct hypergeometric path is the default below this
_STAB_D_MIN = 0.01


@dataclass(frozen=True)
class TransplantParams:
    """Orders (alpha, beta) of a transplantation, alpha != beta.

    ``k`` records the common nonnegative integer shift when the operator
    is viewed as a member of the family with base orders (a, b) =
    (alpha - k, beta - k); it selects the default kernel evaluation path
    and is purely advisory otherwise.
    """

    alpha: float
    beta: float
    k: int = 0

    def __post_init__(self):
        if self.alpha < ORDER_MIN or self.beta < ORDER_MIN:
            raise ValueError(f"orders must be >= {ORDER_MIN}, got {self}")
        if self.alpha == self.beta:
            raise ValueError("equal orders give the identity; not a transplantation")
        if self.k < 0 or self.k != int(self.k):
            raise ValueError(f"shift k must be a nonnegative integer, got {self.k}")
        if min(self.alpha, self.beta) - self.k < ORDER_MIN:
            raise ValueError(f"shift k={self.k} exceeds the orders in {self}")

    @classmethod
    def shifted(cls, a: float, b: float, k: int) -> "TransplantParams":
        return cls(a + k, b + k, k)

    @property
    def a(self) -> float:
        return self.alpha - self.k

    @property
    def b(self) -> float:
        return self.beta - self.k

    @property
    def unit_gap(self) -> bool:
        return 0.0 < abs(self.a - self.b) <= 1.0


@dataclass(frozen=True)
class KernelValue:
    value: float
    branch: str  # "below-diagonal" (y < x) or "above-diagonal" (x < y)
    method: str  # "hypergeometric" or "stabilized-euler"


def _pick_method(params: TransplantParams, method: str) -> str:
    if method == "auto":
        return "euler" if params.k >= STABILIZED_SHIFT else "2f1"
    if method not in ("2f1", "euler"):
        raise ValueError(f"unknown kernel method {method!r}")
    return method


def _stabilized_ok(al: float, be: float) -> bool:
    # needs gamma = (al-be)/2 > -1 and D = (al+be)/2 above the degeneracy
    return abs(al - be) < 2.0 and (al + be) / 2.0 > _STAB_D_MIN


def _branch_euler(al: float, be: float, X, Y) -> np.ndarray:
    """Below-diagonal kernel of the (al -> be) transplantation at Y < X,
    via the log-domain beta-type integral; vectorized over X, Y."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    D = 0.5 * (al + be)
    coef = (al + be) * recip_gamma(0.5 * (be - al)) * recip_gamma(0.5 * (al - be) + 1.0)
    if coef == 0.0:
        return np.zeros(np.broadcast(X, Y).shape)
    log_j = beta_kernel_log_integral(0.5 * (al - be), D, 1.0, X**2, Y**2)
    return coef * np.exp((be + 0.5) * np.log(X) + (al + 0.5) * np.log(Y) + log_j)


def _branch_2f1(al: float, be: float, X: float, Y: float) -> float:
    """Below-diagonal kernel at Y < X via the hypergeometric display."""
    P = 0.5 * (al + be) + 1.0
    Q = 0.5 * (al - be) + 1.0
    R = al + 1.0
    coef = 2.0 * gamma_fn(P) * recip_gamma(R) * recip_gamma(0.5 * (be - al))
    if coef == 0.0:
        return 0.0
    z = (Y / X) ** 2
    return coef * X ** -(al + 1.5) * Y ** (al + 0.5) * hyp2f1(P, Q, R, z)


def kernel_eval(
    params: TransplantParams, x: float, y: float, method: str = "auto"
) -> KernelValue:
    """The transplantation kernel at one off-diagonal point."""
    if x <= 0.0 or y <= 0.0 or x == y:
        raise ValueError(f"kernel needs x, y > 0 and x != y, got ({x}, {y})")
    meth = _pick_method(params, method)
    if y < x:
        branch, al, be, X, Y = "below-diagonal", params.alpha, params.beta, x, y
    else:
        branch, al, be, X, Y = "above-diagonal", params.beta, params.alpha, y, x
    if meth == "euler":
        if not _stabilized_ok(al, be):
            raise ValueError(
                f"stabilized path needs |alpha-beta| < 2 and alpha+beta > {2*_STAB_D_MIN}"
            )
        value = float(_branch_euler(al, be, X, Y))
        return KernelValue(value, branch, "stabilized-euler")
    return KernelValue(_branch_2f1(al, be, X, Y), branch, "hypergeometric")


def kernel_profile(params: TransplantParams, x: float, y, method: str = "auto") -> np.ndarray:
    """Vectorized kernel values K(x, y_i) for a fixed x > 0.

    The internal workhorse of kernel scans and the principal-value
    operator form; picks the stabilized path whenever admissible since
    it vectorizes, falling back to pointwise hypergeometric evaluation.
    """
    y = np.asarray(y, dtype=float)
    if x <= 0.0 or np.any(y <= 0.0) or np.any(y == x):
        raise ValueError("kernel needs x, y > 0 and y != x")
    out = np.empty(y.shape, dtype=float)
    for below in (True, False):
        mask = (y < x) if below else (y > x)
        if not np.any(mask):
            continue
        if below:
            al, be, X, Y = params.alpha, params.beta, np.full(int(mask.sum()), x), y[mask]
        else:
            al, be, X, Y = params.beta, params.alpha, y[mask], np.full(int(mask.sum()), x)
        use_euler = method == "euler" or (method != "2f1" and _stabilized_ok(al, be))
        if use_euler:
            out[mask] = _branch_euler(al, be, X, Y)
        else:
            out[mask] = [_branch_2f1(al, be, Xi, Yi) for Xi, Yi in zip(X, Y)]
    return out


def _kernel_dx_euler(al: float, be: float, x, y, below: bool) -> np.ndarray:
    """d/dx of the (al -> be) kernel on one side of the diagonal,
    stabilized path; (al, be) are the operator's own orders."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    D = 0.5 * (al + be)
    if below:
        # K = 2D C0 x^(be+1/2) y^(al+1/2) J(gam, D, 1; x^2, y^2); the product
        # rule plus x^2 = (x^2 - y^2 s) + y^2 s collapse the derivative to
        c0 = recip_gamma(0.5 * (be - al)) * recip_gamma(0.5 * (al - be) + 1.0)
        if c0 == 0.0:
            return np.zeros(np.broadcast(x, y).shape)
        gam = 0.5 * (al - be)
        j1 = beta_kernel_log_integral(gam, D, 1.0, x**2, y**2)
        j2 = beta_kernel_log_integral(gam + 1.0, D, 2.0, x**2, y**2)
        t1 = D * (2.0 * al + 3.0) * np.exp((be - 0.5) * np.log(x) + (al + 0.5) * np.log(y) + j1)
        t2 = 4.0 * D * (D + 1.0) * np.exp((be - 0.5) * np.log(x) + (al + 2.5) * np.log(y) + j2)
        return -c0 * (t1 + t2)
    # above the diagonal the kernel equals the (be -> al) below-diagonal
    # display at swapped arguments; differentiating it in its second
    # argument gives two positive-coefficient beta-type integrals
    c0 = recip_gamma(0.5 * (al - be)) * recip_gamma(0.5 * (be - al) + 1.0)
    if c0 == 0.0:
        return np.zeros(np.broadcast(x, y).shape)
    gam = 0.5 * (be - al)
    j1 = beta_kernel_log_integral(gam, D, 1.0, y**2, x**2)
    j2 = beta_kernel_log_integral(gam + 1.0, D, 2.0, y**2, x**2)
    t1 = (be + 0.5) * np.exp((al + 0.5) * np.log(y) + (be - 0.5) * np.log(x) + j1)
    t2 = 2.0 * (D + 1.0) * np.exp((al + 0.5) * np.log(y) + (be + 1.5) * np.log(x) + j2)
    return 2.0 * D * c0 * (t1 + t2)


def _kernel_dx_2f1(al: float, be: float, x: float, y: float, below: bool) -> float:
    """d/dx of the (al -> be) kernel, hypergeometric path."""
    P = 0.5 * (al + be) + 1.0
    if below:
        Q = 0.5 * (al - be) + 1.0
        R = al + 1.0
        coef = 2.0 * gamma_fn(P) * recip_gamma(R) * recip_gamma(0.5 * (be - al))
        if coef == 0.0:
            return 0.0
        z = (y / x) ** 2
        bracket = -(al + 1.5) * hyp2f1(P, Q, R, z) - 2.0 * z * hyp2f1_dz(P, Q, R, z)
        return coef * y ** (al + 0.5) * x ** -(al + 2.5) * bracket
    Q = 0.5 * (be - al) + 1.0
    R = be + 1.0
    coef = 2.0 * gamma_fn(P) * recip_gamma(R) * recip_gamma(0.5 * (al - be))
    if coef == 0.0:
        return 0.0
    z = (x / y) ** 2
    bracket = (be + 0.5) * hyp2f1(P, Q, R, z) + 2.0 * z * hyp2f1_dz(P, Q, R, z)
    return coef * y ** -(be + 1.5) * x ** (be - 0.5) * bracket


def kernel_dx(params: TransplantParams, x: float, y: float, method: str = "auto") -> float:
    """d/dx of the transplantation kernel at an off-diagonal point."""
    if x <= 0.0 or y <= 0.0 or x == y:
        raise ValueError(f"kernel needs x, y > 0 and x != y, got ({x}, {y})")
    meth = _pick_method(params, method)
    below = y < x
    al, be = params.alpha, params.beta
    if meth == "euler":
        if not _stabilized_ok(al, be):
            raise ValueError(
                f"stabilized path needs |alpha-beta| < 2 and alpha+beta > {2*_STAB_D_MIN}"
            )
        return float(_kernel_dx_euler(al, be, x, y, below))
    return _kernel_dx_2f1(al, be, x, y, below)


def kernel_dx_profile(params: TransplantParams, x: float, y, method: str = "auto") -> np.ndarray:
    """Vectorized |d/dx K(x, y_i)| companion of kernel_profile."""
    y = np.asarray(y, dtype=float)
    out = np.empty(y.shape, dtype=float)
    for below in (True, False):
        mask = (y < x) if below else (y > x)
        if not np.any(mask):
            continue
        al, be = params.alpha, params.beta
        if method == "euler" or (method != "2f1" and _stabilized_ok(al, be)):
            out[mask] = _kernel_dx_euler(al, be, np.full(int(mask.sum()), x), y[mask], below)
        else:
            out[mask] = [_kernel_dx_2f1(al, be, x, yi, below) for yi in y[mask]]
    return out


# --- the operator -------------------------------------------------------


def transplant_composition(
    params: TransplantParams,
    f,
    x_points,
    *,
    tail_tol: float = 1e-8,
    s_max: float = 1500.0,
) -> np.ndarray:
    """T(alpha -> beta) f as H_beta applied to the tabulated H_alpha f."""
    xs = np.asarray(x_points, dtype=float)
    g = transform_stage(params.alpha, f, use_freq=float(np.max(xs)),
                        tail_tol=tail_tol, s_max=s_max)
    return hankel_apply(params.beta, g, xs)


def transplant_gridfn(
    params: TransplantParams,
    f,
    *,
    out_freq: float,
    out_s_max: float,
    tail_tol: float = 1e-8,
    inner_s_max: float | None = None,
    fine_freq: float | None = None,
    fine_until: float = 0.0,
) -> GridFn:
    """T(alpha -> beta) f tabulated on (0, out_s_max) with a fitted tail.

    The transplanted function decays like x^-(alpha+3/2), inherited from
    the s^(alpha+1/2) behaviour of H_alpha f at the origin, so the tail
    model's leading exponent is known a priori.
    """
    if inner_s_max is None:
        inner_s_max = 1500.0 if isinstance(f, SampledFunction) else 160.0
    g = transform_stage(params.alpha, f, use_freq=out_s_max,
                        tail_tol=tail_tol, s_max=inner_s_max)
    return transform_stage(params.beta, g, use_freq=out_freq, s_max=out_s_max,
                           tail_tol=tail_tol, tail_exponent=params.alpha + 1.5,
                           fine_freq=fine_freq, fine_until=fine_until)


def transplant_kernel_form(
    params: TransplantParams,
    f: SampledFunction,
    x: float,
    *,
    tol: float = 1e-9,
    tail: TailFit | None = None,
    method: str = "auto",
) -> float:
    """T(alpha -> beta) f(x) through the explicit kernel representation:
    PV integral of K(x, y) f(y) over the support plus the diagonal term
    cos((beta - alpha) pi / 2) f(x).

    ``tail`` extends f beyond its support by an inverse-power model; the
    corresponding smooth kernel integral is added (used when f is itself
    a tabulated transplant with slow decay).
    """
    if x <= 0.0:
        raise ValueError("evaluation point must be positive")
    lo, hi = f.support
    if not math.isfinite(hi):
        raise ValueError("kernel form needs a bounded support")

    def integrand(y):
        return kernel_profile(params, x, y, method) * f(y)

    if lo < x < hi:
        value = principal_value(integrand, x, lo, hi, tol).value
    else:
        value = integrate(integrand, lo, hi, tol).value
    value += math.cos((params.beta - params.alpha) * math.pi / 2.0) * float(f(x))
    if tail is not None:
        if tail.start < hi * (1.0 - 1e-9):
            raise ValueError("tail model must start at or beyond the support end")

        def tail_integrand(u):
            y = 1.0 / u
            return kernel_profile(params, x, y, method) * tail(y) / u**2

        value += integrate(tail_integrand, 0.0, 1.0 / tail.start, tol).value
    return value


def chain_decompose(a: float, b: float, k: int) -> list[TransplantParams]:
    """Factor the shifted transplantation over unit order steps.

    For b > a the factors are (a -> a+1), (a+1 -> a+2), ..., ending with
    (a+m -> b), m = floor(b - a); the final factor is dropped when b - a
    is an exact integer.  Mirrored for b < a.  The list is in composition
    order: the operator equals list[0] o list[1] o ... applied to f from
    the right.
    """
    if a == b:
        raise ValueError("equal orders give the identity; nothing to decompose")
    if min(a, b) <= ORDER_MIN:
        raise ValueError(f"chain decomposition needs base orders > {ORDER_MIN}")
    step = 1.0 if b > a else -1.0
    gap = abs(b - a)
    m = int(math.floor(gap + 1e-12))
    factors = []
    for j in range(m):
        factors.append(TransplantParams.shifted(a + j * step, a + (j + 1) * step, k))
    last = a + m * step
    if abs(last - b) > 1e-12:
        factors.append(TransplantParams.shifted(last, b, k))
    return factors
