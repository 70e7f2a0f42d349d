"""HTTP service exposing the library: evaluation endpoints for the
special functions, transforms, kernels, and weights, plus the sweep
endpoints.  The CLI talks to this app in-process by default, so the
same request/response models serve both transports.

Every sweep response carries ``statement`` (the label of the claim being
measured), tabular ``columns``/``rows``, a ``summary``, and ``passed``
reflecting the sweep's invariant thresholds.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .hankel import (
    hankel_transform,
    make_multiplier,
    parse_function,
    plancherel_defect,
)
from .specfun import bessel_j, gamma, hyp2f1, recip_gamma
from .transplant import (
    TransplantParams,
    kernel_eval,
    transplant_composition,
    transplant_kernel_form,
)
from .verify import (
    BoundReport,
    TransferQuery,
    composition_identity_check,
    cz_size_scan,
    cz_smooth_scan,
    lemma_bound_scan,
    norm_scan,
    radial_fourier_check,
    transference_identity_check,
    vector_valued_scan,
)
from .weights import ap_characteristic, dyadic_family, parse_weight

# invariant thresholds used for the pass/fail flag of each sweep
UNIFORMITY_LIMIT = 2.0
LEMMA_STABILITY_LIMIT = 3.0
TRANSFER_LIMIT = 1e-3
RADIAL_LIMIT = 1e-6
CHAIN_LIMIT = 1e-3


class SpecfunRequest(BaseModel):
    fn: str
    args: list[float]


class TransformRequest(BaseModel):
    nu: float = Field(ge=-0.5)
    f: str
    x_points: list[float]


class KernelRequest(BaseModel):
    a: float
    b: float
    k: int = 0
    x: float
    y: float
    method: str = "auto"


class TransplantRequest(BaseModel):
    a: float
    b: float
    k: int = 0
    f: str
    x_points: list[float]
    form: str = "composition"


class ApRequest(BaseModel):
    weight: str
    p: float = 2.0
    j_min: int = -8
    j_max: int = 8


class CzRequest(BaseModel):
    a: float
    b: float
    k_min: int = 10
    k_max: int = 50
    which: str = "size"


class LemmaRequest(BaseModel):
    gammas: list[float] = [0.0, -0.4]
    lambdas: list[float] = [1.0, 2.0]


class NormRequest(BaseModel):
    a: float
    b: float
    p: float = 2.0
    weight: str = "one"
    k_min: int = 0
    k_max: int = 20


class VectorRequest(BaseModel):
    a: float
    b: float
    p: float = 2.0
    weight: str = "one"
    k_max: int = 12
    draws: int = 10
    seed: int = 0


class TransferRequest(BaseModel):
    n: int
    d: int
    k: int
    m: str = "lorentz"
    f: str = "bump:2,0.8"


class RadialRequest(BaseModel):
    n: int
    sigma: float = 1.0


class ChainRequest(BaseModel):
    a: float
    b: float
    k: int = 0
    f: str = "bump:2,0.8"


def _report_payload(rep: BoundReport, passed: bool) -> dict:
    rows = [
        [a, m, b, r]
        for a, m, b, r in zip(rep.axis_values, rep.measured, rep.bound, rep.ratios)
    ]
    notes = {k: v for k, v in rep.notes.items() if k != "table"}
    return {
        "statement": rep.statement,
        "columns": [rep.axis_name, "measured", "bound", "ratio"],
        "rows": rows,
        "summary": {
            "max_ratio": rep.max_ratio,
            "uniformity_ratio": rep.uniformity_ratio,
            **notes,
        },
        "passed": passed,
    }


def _check_payload(statement: str, discrepancy: float, limit: float, **extra) -> dict:
    return {
        "statement": statement,
        "columns": ["quantity", "value"],
        "rows": [["max_rel_discrepancy", discrepancy], ["limit", limit]],
        "summary": {"max_rel_discrepancy": discrepancy, "limit": limit, **extra},
        "passed": bool(discrepancy <= limit),
    }


def create_app() -> FastAPI:
    app = FastAPI(title="hankelkit", version=__version__)

    def guard(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, OverflowError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/version")
    def version():
        return {"version": __version__}

    @app.post("/specfun/eval")
    def specfun_eval(req: SpecfunRequest):
        table = {
            "gamma": lambda a: gamma(a[0]),
            "recip_gamma": lambda a: recip_gamma(a[0]),
            "bessel_j": lambda a: bessel_j(a[0], a[1]),
            "hyp2f1": lambda a: hyp2f1(a[0], a[1], a[2], a[3]),
        }
        if req.fn not in table:
            raise HTTPException(422, f"unknown function {req.fn!r}")
        return {"fn": req.fn, "args": req.args,
                "value": guard(table[req.fn], req.args)}

    @app.post("/hankel/transform")
    def hankel_endpoint(req: TransformRequest):
        f = guard(parse_function, req.f)
        vals = guard(hankel_transform, req.nu, f, np.asarray(req.x_points))
        return {"nu": req.nu, "f": req.f, "x_points": req.x_points,
                "values": np.atleast_1d(vals).tolist()}

    @app.post("/hankel/plancherel")
    def plancherel_endpoint(req: TransformRequest):
        f = guard(parse_function, req.f)
        return {"nu": req.nu, "f": req.f,
                "defect": guard(plancherel_defect, req.nu, f)}

    @app.post("/kernel/eval")
    def kernel_endpoint(req: KernelRequest):
        pp = guard(TransplantParams.shifted, req.a, req.b, req.k)
        kv = guard(kernel_eval, pp, req.x, req.y, req.method)
        return {"a": req.a, "b": req.b, "k": req.k, "x": req.x, "y": req.y,
                "value": kv.value, "branch": kv.branch, "method": kv.method}

    @app.post("/transplant/apply")
    def transplant_endpoint(req: TransplantRequest):
        pp = guard(TransplantParams.shifted, req.a, req.b, req.k)
        f = guard(parse_function, req.f)
        xs = np.asarray(req.x_points, dtype=float)
        if req.form == "composition":
            vals = guard(transplant_composition, pp, f, xs).tolist()
        elif req.form == "kernel":
            vals = [guard(transplant_kernel_form, pp, f, float(x)) for x in xs]
        else:
            raise HTTPException(422, f"unknown form {req.form!r}")
        return {"a": req.a, "b": req.b, "k": req.k, "f": req.f,
                "form": req.form, "x_points": req.x_points, "values": vals}

    @app.post("/ap")
    def ap_endpoint(req: ApRequest):
        w = guard(parse_weight, req.weight, req.p)
        res = guard(ap_characteristic, w, dyadic_family(req.j_min, req.j_max))
        rows = [
            [r["a"], r["b"], r["value"]]
            for r in res.rows
        ]
        return {
            "statement": "weight-class-characteristic",
            "columns": ["a", "b", "value"],
            "rows": rows,
            "summary": {"weight": w.name, "p": req.p,
                        "characteristic": res.value, "divergent": res.divergent},
            "passed": bool(res.value >= 1.0 - 1e-12),
        }

    @app.post("/verify/cz")
    def cz_endpoint(req: CzRequest):
        scan = cz_size_scan if req.which == "size" else cz_smooth_scan
        if req.which not in ("size", "smooth"):
            raise HTTPException(422, f"unknown scan {req.which!r}")
        rep = guard(scan, req.a, req.b, range(req.k_min, req.k_max + 1))
        return _report_payload(rep, rep.uniformity_ratio <= UNIFORMITY_LIMIT)

    @app.post("/verify/lemma")
    def lemma_endpoint(req: LemmaRequest):
        rep = guard(lemma_bound_scan, tuple(req.gammas), tuple(req.lambdas))
        return _report_payload(rep, rep.uniformity_ratio <= LEMMA_STABILITY_LIMIT)

    @app.post("/verify/norm")
    def norm_endpoint(req: NormRequest):
        w = guard(parse_weight, req.weight, req.p)
        rep = guard(norm_scan, req.a, req.b, range(req.k_min, req.k_max + 1),
                    req.p, w)
        return _report_payload(rep, rep.uniformity_ratio <= UNIFORMITY_LIMIT)

    @app.post("/verify/vector")
    def vector_endpoint(req: VectorRequest):
        w = guard(parse_weight, req.weight, req.p)
        rep = guard(vector_valued_scan, req.a, req.b, req.p, w,
                    k_max=req.k_max, draws=req.draws, seed=req.seed)
        finite = all(math.isfinite(m) for m in rep.measured)
        return _report_payload(rep, finite)

    @app.post("/verify/transfer")
    def transfer_endpoint(req: TransferRequest):
        m = guard(make_multiplier, req.m)
        f = guard(parse_function, req.f)
        q = guard(TransferQuery, req.n, req.d, req.k, m)
        disc = guard(transference_identity_check, q, f)
        return _check_payload("multiplier-transference-identity", disc,
                              TRANSFER_LIMIT, n=req.n, d=req.d, k=req.k,
                              multiplier=req.m, f=req.f)

    @app.post("/verify/radial")
    def radial_endpoint(req: RadialRequest):
        disc = guard(radial_fourier_check, req.n, sigma=req.sigma)
        return _check_payload("radial-transform-identity", disc, RADIAL_LIMIT,
                              n=req.n, sigma=req.sigma)

    @app.post("/verify/chain")
    def chain_endpoint(req: ChainRequest):
        f = guard(parse_function, req.f)
        disc = guard(composition_identity_check, req.a, req.b, req.k, f)
        return _check_payload("chain-composition-identity", disc, CHAIN_LIMIT,
                              a=req.a, b=req.b, k=req.k, f=req.f)

    return app


app = create_app()
__all__ = ["app", "create_app"]
