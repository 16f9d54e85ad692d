"""Manifest ingestion and JSON report emission.

Manifests are flat key-value text with INI-style section headers (see
docs/manifest.md).  Reports serialize with every float printed to 17
significant digits, which round-trips doubles losslessly; the document
layout is pinned by docs/report_schema.json.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .classify import DEFAULT_TOL_CURV, DEFAULT_TOL_FIRST
from .errors import QManifoldError
from .structures import MetricSpec

TOL_ENV_VAR = "QMANIFOLD_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Residual thresholds: ``first`` for one-derivative identities,
    ``curv`` for curvature-level (two-derivative) ones."""

    first: float = DEFAULT_TOL_FIRST
    curv: float = DEFAULT_TOL_CURV

    @classmethod
    def from_env(cls) -> "Tolerances":
        """Defaults, overridden by QMANIFOLD_TOL=<float> when set.

        The env value becomes the first-derivative tolerance; the
        curvature tolerance is 10x looser, mirroring the default ratio.
        """
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is None:
            return cls()
        try:
            tol = float(raw)
        except ValueError as exc:
            raise QManifoldError(f"{TOL_ENV_VAR} must be a float, got {raw!r}") from exc
        if tol <= 0:
            raise QManifoldError(f"{TOL_ENV_VAR} must be positive, got {tol}")
        return cls(first=tol, curv=10.0 * tol)


@dataclass(frozen=True)
class Manifest:
    a_source: str
    b_source: str
    points: tuple
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 42
    count: int = 100
    box: tuple = (-1.5, 1.5)

    def spec(self) -> MetricSpec:
        return MetricSpec.from_strings(self.a_source, self.b_source)

    def echo(self) -> dict:
        return {
            "metric": {"A": self.a_source, "B": self.b_source},
            "points": [list(p) for p in self.points],
            "options": {
                "tol_first": self.tolerances.first,
                "tol_curv": self.tolerances.curv,
                "seed": self.seed,
                "count": self.count,
                "box": list(self.box),
            },
        }


def _parse_triple(text: str, context: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise QManifoldError(f"{context}: expected three comma-separated numbers, "
                             f"got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise QManifoldError(f"{context}: bad number in {text!r}") from exc


def parse_manifest(text: str, base_tolerances: Optional[Tolerances] = None) -> Manifest:
    """Parse manifest text.  The [metric] section with A and B is required;
    [points] and [options] are optional."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise QManifoldError(f"malformed manifest: {exc}") from exc
    if "metric" not in parser or "A" not in parser["metric"] \
            or "B" not in parser["metric"]:
        raise QManifoldError("manifest needs a [metric] section with A and B")

    points = []
    if "points" in parser:
        for key, value in parser["points"].items():
            points.append(_parse_triple(value, f"[points] {key}"))

    tol = base_tolerances if base_tolerances is not None else Tolerances.from_env()
    seed, count, box = 42, 100, (-1.5, 1.5)
    if "options" in parser:
        opts = parser["options"]
        tol = Tolerances(
            first=opts.getfloat("tol_first", tol.first),
            curv=opts.getfloat("tol_curv", tol.curv),
        )
        seed = opts.getint("seed", seed)
        count = opts.getint("count", count)
        if "box" in opts:
            lo, hi = (float(p.strip()) for p in opts["box"].split(","))
            box = (lo, hi)
    return Manifest(
        a_source=parser["metric"]["A"].strip(),
        b_source=parser["metric"]["B"].strip(),
        points=tuple(points),
        tolerances=tol,
        seed=seed,
        count=count,
        box=box,
    )


def load_manifest(path: str, base_tolerances: Optional[Tolerances] = None) -> Manifest:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_manifest(fh.read(), base_tolerances)


# ---------------------------------------------------------------------------
# JSON emission with pinned float formatting
# ---------------------------------------------------------------------------

def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise QManifoldError(f"refusing to serialize non-finite number {x}")
    return format(x, ".17g")


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def to_json(obj, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data, floats at 17 significant
    digits.  Deterministic: dict order is preserved as built."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return f'"{_escape(obj)}"'
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [to_json(item, indent + 1) for item in obj]
        if all("\n" not in it and len(it) < 20 for it in items):
            return "[" + ", ".join(items) + "]"
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{_escape(str(k))}": {to_json(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
