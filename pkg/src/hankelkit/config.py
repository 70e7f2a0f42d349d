"""Run configuration: defaults, optional key=value config file, and
command-line overrides, with a stable hash for report provenance."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, fields, replace

__all__ = ["RunConfig", "load_config"]


@dataclass(frozen=True)
class RunConfig:
    quad_tol: float = 1e-9
    cross_tol: float = 1e-6
    grid_n: int = 64
    x_min: float = 0.1
    x_max: float = 8.0
    grid_scale: str = "log"
    workers: int = 1
    format: str = "csv"
    seed: int = 0

    def __post_init__(self):
        if self.quad_tol <= 0.0 or self.cross_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.x_min <= 0.0 or self.x_min >= self.x_max:
            raise ValueError("need 0 < x_min < x_max")
        if self.grid_scale not in ("log", "linear"):
            raise ValueError(f"grid_scale must be log or linear, got {self.grid_scale}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format}")
        if self.grid_n < 2 or self.workers < 1:
            raise ValueError("grid_n >= 2 and workers >= 1 required")

    def hash(self) -> str:
        text = ",".join(
            f"{f.name}={getattr(self, f.name)!r}" for f in fields(self)
        )
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def _coerce(name: str, raw: str):
    kind = RunConfig.__dataclass_fields__[name].type
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return raw


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Build a RunConfig with precedence defaults < file < overrides.

    The file is plain ``key = value`` lines; '#' starts a comment.  The
    HANKELKIT_WORKERS environment variable, when set, overrides the
    worker count from defaults and file (but not explicit overrides).
    """
    values: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, _, raw = line.partition("=")
                key = key.strip()
                if key not in RunConfig.__dataclass_fields__:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _coerce(key, raw.strip())
    env_workers = os.environ.get("HANKELKIT_WORKERS")
    if env_workers is not None and "workers" not in values:
        values["workers"] = int(env_workers)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return replace(RunConfig(), **values)
