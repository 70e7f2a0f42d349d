"""Deterministic report serialization.

Reports are plain tables plus a provenance header (tool version, config
hash, seed, and the label of the statement being measured).  The same
invocation with the same config and seed must produce byte-identical
output, so no timestamps, no dict-ordering dependence, and floats are
rendered with repr (shortest round-trip form).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

from . import __version__
from .config import RunConfig

__all__ = ["Report", "render"]


@dataclass(frozen=True)
class Report:
    statement: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    summary: dict = field(default_factory=dict)


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def render(report: Report, config: RunConfig, fmt: str | None = None) -> str:
    fmt = config.format if fmt is None else fmt
    meta = {
        "version": __version__,
        "config_hash": config.hash(),
        "seed": config.seed,
        "statement": report.statement,
    }
    if fmt == "json":
        payload = {
            **meta,
            "summary": _jsonable(report.summary),
            "columns": list(report.columns),
            "rows": [_jsonable(r) for r in report.rows],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ": "), indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    out = io.StringIO()
    for key in ("version", "config_hash", "seed", "statement"):
        out.write(f"# {key}={meta[key]}\n")
    for key in sorted(report.summary):
        out.write(f"# {key}={_cell(report.summary[key])}\n")
    out.write(",".join(report.columns) + "\n")
    for row in report.rows:
        out.write(",".join(_cell(v) for v in row) + "\n")
    return out.getvalue()
