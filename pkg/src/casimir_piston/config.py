"""Run configuration for the command-line front end.

A run is described by one JSON document; every key is optional except the
shape block, and unknown keys are rejected::

    {
      "shape": {"type": "triangle", "a": 1.0},
      "mode_count": 4000,
      "spectrum_source": "analytic",
      "method": ["quantum", "near"],
      "L_range": {"start": 0.03, "stop": 2.0, "num": 60, "spacing": "log"},
      "T": 0.0,
      "tol": 1e-6,
      "truncations": [20],
      "output": "csv"
    }

Shapes: ``rectangle`` (w, h), ``square`` (w), ``circle`` (R), ``triangle``
(a), ``regular_polygon`` (N, Rc), ``polygon`` (vertices).
"""
import json
import math
import re
from dataclasses import dataclass, field, fields
from typing import Optional, Tuple

import numpy as np

from . import geometry
from .errors import ConfigError, InvalidGeometryError

METHODS = ("finiteT", "quantum", "classical", "near", "far", "kernel", "dos-oracle")
REGIMES = ("quantum", "classical", "finiteT")
SOURCES = ("analytic", "numerical", "file")

# key=value, where a value may be a bracketed vertex list containing commas
_INLINE_PARAM = re.compile(r"\s*(\w+)\s*=\s*(\[.*?\]\]|[^,]+)\s*(?:,|$)")

_SHAPE_KEYS = {
    "rectangle": ("w", "h"),
    "square": ("w",),
    "circle": ("R",),
    "triangle": ("a",),
    "regular_polygon": ("N", "Rc"),
    "polygon": ("vertices",),
}


@dataclass(frozen=True)
class KernelConfig:
    Q: Tuple[float, ...] = tuple(np.geomspace(10.0, 1e5, 13))
    L_inf: float = 100.0
    kernel: str = "exp"
    nx_max: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    shape: object
    mode_count: int = 4000
    spectrum_source: str = "analytic"
    spectrum_file: Optional[str] = None
    grid_h: Optional[float] = None
    solver: str = "fd"
    method: Tuple[str, ...] = ("quantum",)
    regime: Optional[str] = None
    L_values: Tuple[float, ...] = (0.5,)
    T: float = 0.0
    tol: float = 1e-6
    strict: bool = False
    truncations: Tuple[int, ...] = ()
    output: str = "csv"
    raw: bool = False
    workers: int = 1
    kernel: KernelConfig = field(default_factory=KernelConfig)

    def __post_init__(self):
        if not self.L_values or any(not (math.isfinite(x) and x > 0) for x in self.L_values):
            raise ConfigError("L_values must be a nonempty list of positive numbers")
        if not 0 < self.tol <= 1e-2:
            raise ConfigError(f"tol must lie in (0, 1e-2], got {self.tol}")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ConfigError(f"T must be >= 0, got {self.T}")
        if not isinstance(self.mode_count, int) or self.mode_count < 1:
            raise ConfigError("mode_count must be a positive integer")
        for m in self.method:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if self.regime is not None and self.regime not in REGIMES:
            raise ConfigError(f"regime must be one of {', '.join(REGIMES)}")
        if self.spectrum_source not in SOURCES:
            raise ConfigError(f"spectrum_source must be one of {', '.join(SOURCES)}")
        if self.spectrum_source == "file" and not self.spectrum_file:
            raise ConfigError("spectrum_source 'file' needs spectrum_file")
        if self.spectrum_source == "numerical" and not (self.grid_h and self.grid_h > 0):
            raise ConfigError("spectrum_source 'numerical' needs a positive grid_h")
        if self.solver not in ("fd", "fem"):
            raise ConfigError("solver must be 'fd' or 'fem'")
        if self.output not in ("csv", "json"):
            raise ConfigError("output must be 'csv' or 'json'")
        if any(not isinstance(n, int) or n < 1 for n in self.truncations):
            raise ConfigError("truncations must be positive integers")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def parse_shape(spec):
    """Build a cross section from a dict or an inline ``name:k=v,k=v`` string."""
    if isinstance(spec, str):
        name, _, rest = spec.partition(":")
        params = {}
        rest = rest.strip()
        while rest:
            m = _INLINE_PARAM.match(rest)
            if not m:
                raise ConfigError(f"shape parameters {rest!r} are not key=value pairs")
            params[m.group(1)] = m.group(2).strip()
            rest = rest[m.end():]
        spec = {"type": name.strip(), **params}
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("shape block needs a 'type'")
    kind = spec["type"]
    if kind not in _SHAPE_KEYS:
        raise ConfigError(f"unknown shape {kind!r}; choose from {', '.join(_SHAPE_KEYS)}")
    extra = set(spec) - {"type", *_SHAPE_KEYS[kind]}
    missing = set(_SHAPE_KEYS[kind]) - set(spec)
    if extra:
        raise ConfigError(f"unknown keys for {kind}: {sorted(extra)}")
    if missing:
        raise ConfigError(f"missing keys for {kind}: {sorted(missing)}")
    try:
        if kind == "polygon":
            verts = spec["vertices"]
            if isinstance(verts, str):
                verts = json.loads(verts)
            return geometry.Polygon(tuple(tuple(v) for v in verts))
        if kind == "regular_polygon":
            return geometry.RegularPolygon(int(spec["N"]), float(spec["Rc"]))
        vals = {k: float(spec[k]) for k in _SHAPE_KEYS[kind]}
        if kind == "rectangle":
            return geometry.Rectangle(vals["w"], vals["h"])
        if kind == "square":
            return geometry.Rectangle(vals["w"], vals["w"])
        if kind == "circle":
            return geometry.Circle(vals["R"])
        return geometry.EquilateralTriangle(vals["a"])
    except (InvalidGeometryError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid shape: {exc}") from exc


def _L_values(doc):
    if "L_values" in doc and "L_range" in doc:
        raise ConfigError("give either L_values or L_range, not both")
    if "L_range" in doc:
        r = doc["L_range"]
        unknown = set(r) - {"start", "stop", "num", "spacing"}
        if unknown:
            raise ConfigError(f"unknown L_range keys: {sorted(unknown)}")
        try:
            start, stop, num = float(r["start"]), float(r["stop"]), int(r["num"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("L_range needs numeric start, stop, num") from exc
        spacing = r.get("spacing", "linear")
        if spacing == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError("log spacing needs positive start and stop")
            vals = np.geomspace(start, stop, num)
        elif spacing == "linear":
            vals = np.linspace(start, stop, num)
        else:
            raise ConfigError("L_range spacing must be 'linear' or 'log'")
        return tuple(float(v) for v in vals)
    vals = doc.get("L_values", [0.5])
    if isinstance(vals, (int, float)):
        vals = [vals]
    return tuple(float(v) for v in vals)


def _kernel(block):
    if block is None:
        return KernelConfig()
    unknown = set(block) - {"Q", "L_inf", "kernel", "nx_max"}
    if unknown:
        raise ConfigError(f"unknown kernel keys: {sorted(unknown)}")
    q = block.get("Q", KernelConfig.Q)
    if isinstance(q, dict):
        try:
            q = np.geomspace(float(q["start"]), float(q["stop"]), int(q["num"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError("kernel Q range needs start, stop, num") from exc
    elif isinstance(q, (int, float)):
        q = [q]
    q = tuple(float(v) for v in q)
    if not q or any(v <= 0 for v in q):
        raise ConfigError("kernel Q values must be positive")
    kern = block.get("kernel", "exp")
    if kern not in ("exp", "gauss"):
        raise ConfigError("kernel must be 'exp' or 'gauss'")
    nx = block.get("nx_max")
    return KernelConfig(q, float(block.get("L_inf", 100.0)), kern,
                        None if nx is None else int(nx))


_TOP_KEYS = {f.name for f in fields(RunConfig)} | {"L_range"}


def from_dict(doc):
    """Validate a config document and return a :class:`RunConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "shape" not in doc:
        raise ConfigError("config needs a shape block")
    method = doc.get("method", ["quantum"])
    if isinstance(method, str):
        method = [method]
    try:
        return RunConfig(
            shape=parse_shape(doc["shape"]),
            mode_count=doc.get("mode_count", 4000),
            spectrum_source=doc.get("spectrum_source", "analytic"),
            spectrum_file=doc.get("spectrum_file"),
            grid_h=doc.get("grid_h"),
            solver=doc.get("solver", "fd"),
            method=tuple(method),
            regime=doc.get("regime"),
            L_values=_L_values(doc),
            T=float(doc.get("T", 0.0)),
            tol=float(doc.get("tol", 1e-6)),
            strict=bool(doc.get("strict", False)),
            truncations=tuple(doc.get("truncations", ())),
            output=doc.get("output", "csv"),
            raw=bool(doc.get("raw", False)),
            workers=int(doc.get("workers", 1)),
            kernel=_kernel(doc.get("kernel")),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return doc


def merge(doc, overrides):
    """Config document with inline command-line values applied on top."""
    out = dict(doc)
    for key, val in overrides.items():
        if val is None:
            continue
        if key in ("L_values",):
            out.pop("L_range", None)
        out[key] = val
    return out


__all__ = ["RunConfig", "KernelConfig", "METHODS", "from_dict", "load", "merge",
           "parse_shape"]
