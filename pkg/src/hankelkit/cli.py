"""Command-line front end.

Every subcommand is a thin client of the HTTP service: it builds a
request, posts it (in-process by default, or to --server URL), and
serializes the response as a deterministic report.  Exit codes: 0 when
the operation passes its invariant, 1 on an invariant failure, 2 on
usage errors.
"""

from __future__ import annotations

import sys

import click

from .config import RunConfig, load_config
from .report import Report, render

CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}


class _Session:
    def __init__(self, config: RunConfig, server: str | None, out: str | None):
        self.config = config
        self.server = server
        self.out = out
        self._client = None

    @property
    def client(self):
        if self._client is None:
            if self.server:
                import httpx

                self._client = httpx.Client(base_url=self.server)
            else:
                import warnings

                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    from fastapi.testclient import TestClient

                from .service import create_app

                self._client = TestClient(create_app())
        return self._client

    def call(self, path: str, payload: dict) -> dict:
        resp = self.client.post(path, json=payload)
        if resp.status_code == 422:
            detail = resp.json().get("detail", "invalid parameters")
            raise click.UsageError(f"{path}: {detail}")
        if resp.status_code >= 400:
            raise click.ClickException(f"{path}: HTTP {resp.status_code}: {resp.text}")
        return resp.json()

    def emit(self, report: Report, passed: bool = True) -> None:
        text = render(report, self.config)
        if self.out:
            with open(self.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)
        sys.exit(0 if passed else 1)

    def emit_payload(self, payload: dict) -> None:
        rows = tuple(tuple(r) for r in payload["rows"])
        report = Report(
            statement=payload["statement"],
            columns=tuple(payload["columns"]),
            rows=rows,
            summary=payload.get("summary", {}),
        )
        self.emit(report, bool(payload.get("passed", True)))


def _session(ctx: click.Context) -> _Session:
    return ctx.obj


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Key = value config file.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
              help="Report format (default csv).")
@click.option("--out", type=click.Path(), default=None,
              help="Write the report to PATH instead of stdout.")
@click.option("--seed", type=int, default=None, help="Seed for sweep draws.")
@click.option("--workers", type=int, default=None, help="Sweep worker count.")
@click.option("--server", default=None,
              help="Base URL of a running service; defaults to in-process.")
@click.pass_context
def main(ctx, config_path, fmt, out, seed, workers, server):
    """Hankel transplantation numerics and verification sweeps."""
    try:
        config = load_config(config_path, format=fmt, seed=seed, workers=workers)
    except (ValueError, OSError) as exc:
        raise click.UsageError(str(exc))
    ctx.obj = _Session(config, server, out)


# --- evaluation commands ----------------------------------------------------


@main.group()
def specfun():
    """Special-function primitives."""


@specfun.command("eval")
@click.argument("fn")
@click.argument("args", nargs=-1, type=float, required=True)
@click.pass_context
def specfun_eval(ctx, fn, args):
    """Evaluate FN (gamma, recip_gamma, bessel_j, hyp2f1) at ARGS."""
    s = _session(ctx)
    payload = s.call("/specfun/eval", {"fn": fn, "args": list(args)})
    report = Report(
        statement="special-function-evaluation",
        columns=("fn", "args", "value"),
        rows=((fn, ";".join(repr(a) for a in args), payload["value"]),),
    )
    s.emit(report)


@main.group()
def hankel():
    """Hankel transform of a named function."""


@hankel.command("transform")
@click.option("--nu", type=float, required=True, help="Transform order (>= -1/2).")
@click.option("--f", "fname", required=True, help="Function spec, e.g. bump:2,0.8.")
@click.option("--xmin", type=float, default=None)
@click.option("--xmax", type=float, default=None)
@click.option("--n", "n_points", type=int, default=None)
@click.pass_context
def hankel_transform_cmd(ctx, nu, fname, xmin, xmax, n_points):
    s = _session(ctx)
    xs = _grid_points(s.config, xmin, xmax, n_points)
    payload = s.call("/hankel/transform",
                     {"nu": nu, "f": fname, "x_points": xs})
    rows = tuple(zip(payload["x_points"], payload["values"]))
    s.emit(Report(
        statement="hankel-transform-evaluation",
        columns=("x", "value"),
        rows=rows,
        summary={"nu": nu, "f": fname},
    ))


@main.group()
def kernel():
    """Transplantation kernel values."""


@kernel.command("eval")
@click.option("--alpha", type=float, required=True)
@click.option("--beta", type=float, required=True)
@click.option("--k", type=int, default=0)
@click.option("--x", type=float, required=True)
@click.option("--y", type=float, required=True)
@click.option("--method", type=click.Choice(["auto", "2f1", "euler"]), default="auto")
@click.pass_context
def kernel_eval_cmd(ctx, alpha, beta, k, x, y, method):
    s = _session(ctx)
    payload = s.call("/kernel/eval", {"a": alpha, "b": beta, "k": k,
                                      "x": x, "y": y, "method": method})
    s.emit(Report(
        statement="transplantation-kernel-evaluation",
        columns=("a", "b", "k", "x", "y", "branch", "method", "value"),
        rows=((alpha, beta, k, x, y, payload["branch"], payload["method"],
               payload["value"]),),
    ))


@main.group()
def transplant():
    """Transplantation operator applied to a named function."""


@transplant.command("apply")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--k", type=int, default=0)
@click.option("--f", "fname", required=True)
@click.option("--form", type=click.Choice(["composition", "kernel"]),
              default="composition")
@click.option("--xmin", type=float, default=None)
@click.option("--xmax", type=float, default=None)
@click.option("--n", "n_points", type=int, default=None)
@click.pass_context
def transplant_apply(ctx, a, b, k, fname, form, xmin, xmax, n_points):
    s = _session(ctx)
    xs = _grid_points(s.config, xmin, xmax, n_points)
    payload = s.call("/transplant/apply",
                     {"a": a, "b": b, "k": k, "f": fname, "form": form,
                      "x_points": xs})
    rows = tuple(zip(payload["x_points"], payload["values"]))
    s.emit(Report(
        statement="transplantation-operator-evaluation",
        columns=("x", "value"),
        rows=rows,
        summary={"a": a, "b": b, "k": k, "f": fname, "form": form},
    ))


@main.command("ap")
@click.option("--weight", required=True, help="Weight spec, e.g. pow:0.5.")
@click.option("--p", type=float, default=2.0)
@click.option("--family", default="dyadic:-8,8",
              help="Interval family, dyadic:JMIN,JMAX.")
@click.pass_context
def ap_cmd(ctx, weight, p, family):
    """Muckenhoupt characteristic of a weight over an interval family."""
    s = _session(ctx)
    try:
        kind, _, rng = family.partition(":")
        if kind != "dyadic":
            raise ValueError(f"unknown family {family!r}")
        j_min, j_max = (int(t) for t in rng.split(","))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    payload = s.call("/ap", {"weight": weight, "p": p,
                             "j_min": j_min, "j_max": j_max})
    # a divergence flag is informational, not a failure
    payload["passed"] = True
    s.emit_payload(payload)


# --- verification sweeps ----------------------------------------------------


@main.group()
def verify():
    """Sweeps measuring the library's uniformity and identity claims."""


@verify.command("cz")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--kmin", type=int, default=10)
@click.option("--kmax", type=int, default=50)
@click.option("--smooth", is_flag=True,
              help="Scan the kernel derivative instead of the kernel.")
@click.pass_context
def verify_cz(ctx, a, b, kmin, kmax, smooth):
    s = _session(ctx)
    payload = s.call("/verify/cz", {"a": a, "b": b, "k_min": kmin,
                                    "k_max": kmax,
                                    "which": "smooth" if smooth else "size"})
    s.emit_payload(payload)


@verify.command("lemma")
@click.option("--gamma", "gammas", type=float, multiple=True, default=(0.0, -0.4))
@click.option("--lambda", "lambdas", type=float, multiple=True, default=(1.0, 2.0))
@click.pass_context
def verify_lemma(ctx, gammas, lambdas):
    s = _session(ctx)
    payload = s.call("/verify/lemma", {"gammas": list(gammas),
                                       "lambdas": list(lambdas)})
    s.emit_payload(payload)


@verify.command("norm")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--p", type=float, default=2.0)
@click.option("--weight", default="one")
@click.option("--kmin", type=int, default=0)
@click.option("--kmax", type=int, default=20)
@click.pass_context
def verify_norm(ctx, a, b, p, weight, kmin, kmax):
    s = _session(ctx)
    payload = s.call("/verify/norm", {"a": a, "b": b, "p": p, "weight": weight,
                                      "k_min": kmin, "k_max": kmax})
    s.emit_payload(payload)


@verify.command("vector")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--p", type=float, default=2.0)
@click.option("--weight", default="one")
@click.option("--kmax", type=int, default=12)
@click.option("--draws", type=int, default=10)
@click.pass_context
def verify_vector(ctx, a, b, p, weight, kmax, draws):
    s = _session(ctx)
    payload = s.call("/verify/vector",
                     {"a": a, "b": b, "p": p, "weight": weight, "k_max": kmax,
                      "draws": draws, "seed": s.config.seed})
    s.emit_payload(payload)


@verify.command("transfer")
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--m", "mname", default="lorentz")
@click.option("--f", "fname", default="bump:2,0.8")
@click.pass_context
def verify_transfer(ctx, n, d, k, mname, fname):
    s = _session(ctx)
    payload = s.call("/verify/transfer", {"n": n, "d": d, "k": k,
                                          "m": mname, "f": fname})
    s.emit_payload(payload)


@verify.command("radial")
@click.option("--n", type=int, required=True)
@click.option("--sigma", type=float, default=1.0)
@click.pass_context
def verify_radial(ctx, n, sigma):
    s = _session(ctx)
    payload = s.call("/verify/radial", {"n": n, "sigma": sigma})
    s.emit_payload(payload)


@verify.command("chain")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--k", type=int, default=0)
@click.option("--f", "fname", default="bump:2,0.8")
@click.pass_context
def verify_chain(ctx, a, b, k, fname):
    s = _session(ctx)
    payload = s.call("/verify/chain", {"a": a, "b": b, "k": k, "f": fname})
    s.emit_payload(payload)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


def _grid_points(config: RunConfig, xmin, xmax, n_points) -> list[float]:
    import numpy as np

    lo = config.x_min if xmin is None else xmin
    hi = config.x_max if xmax is None else xmax
    n = config.grid_n if n_points is None else n_points
    if lo <= 0.0 or lo >= hi or n < 2:
        raise click.UsageError(f"need 0 < xmin < xmax and n >= 2, got ({lo}, {hi}, {n})")
    if config.grid_scale == "log":
        return list(np.geomspace(lo, hi, n))
    return list(np.linspace(lo, hi, n))


if __name__ == "__main__":
    main()
