"""Instance and solution files.

Both are versioned JSON.  Floats are written with 17 significant digits so
that reading a file back reproduces every double exactly.  Sequences in
files are 1-based; in memory they are 0-based.
"""
from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from .errors import InvalidInstance
from .tour import Instance, TourConfig

INSTANCE_SCHEMA = "dubins-tsp/instance"
SOLUTION_SCHEMA = "dubins-tsp/solution"
VERSION = 1


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed 17-digit floats; short lists of numbers stay on one line."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj) and len(obj) <= 4:
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def instance_to_dict(instance: Instance, generation=None) -> dict:
    d = {
        "schema": INSTANCE_SCHEMA,
        "version": VERSION,
        "rho": instance.rho,
        "points": [[x, y] for x, y in instance.points],
    }
    if instance.box is not None:
        d["box"] = float(instance.box)
    if generation is not None:
        d["generation"] = generation
    return d


def instance_hash(instance: Instance) -> str:
    """SHA-256 of the instance's rho and points in canonical text."""
    body = dumps({"rho": instance.rho, "points": [[x, y] for x, y in instance.points]})
    return hashlib.sha256(body.encode()).hexdigest()


def instance_from_dict(d: dict) -> Instance:
    if d.get("schema") != INSTANCE_SCHEMA:
        raise InvalidInstance(f"not an instance file (schema={d.get('schema')!r})")
    if d.get("version") != VERSION:
        raise InvalidInstance(f"unsupported instance version {d.get('version')!r}")
    try:
        pts = [(float(p[0]), float(p[1])) for p in d["points"]]
        rho = float(d["rho"])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise InvalidInstance(f"malformed instance file: {exc}") from None
    return Instance(pts, rho, d.get("box"))


def write_instance(path, instance: Instance, generation=None):
    Path(path).write_text(dumps(instance_to_dict(instance, generation)) + "\n")


def read_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def solution_to_dict(instance, config, evaluation, *, instance_path=None, settings=None,
                     trace=None, extra=None) -> dict:
    d = {
        "schema": SOLUTION_SCHEMA,
        "version": VERSION,
        "instance": {"path": None if instance_path is None else str(instance_path),
                     "sha256": instance_hash(instance)},
        "sequence": [i + 1 for i in config.sequence],
        "angles": list(config.angles),
        "length": evaluation.length,
        "certificate": evaluation.gap_bound,
        "edges": [
            {
                "subtype": e.subtype,
                "arc1": e.arc1_angle,
                "straight": e.straight_length,
                "arc2": e.arc2_angle,
                "length": e.total_length,
            }
            for e in evaluation.edges
        ],
    }
    if settings is not None:
        d["settings"] = settings
    if trace is not None:
        d["trace"] = {
            "iterations": len(trace) - 1,
            "initial_length": float(trace.lengths[0]),
            "final_length": float(trace.lengths[-1]),
            "final_grad_norm": float(trace.grad_norms[-1]),
        }
    if extra:
        d.update(extra)
    return d


def config_from_solution(d: dict) -> TourConfig:
    if d.get("schema") != SOLUTION_SCHEMA:
        raise InvalidInstance(f"not a solution file (schema={d.get('schema')!r})")
    return TourConfig([i - 1 for i in d["sequence"]], d["angles"])


def write_solution(path, data: dict):
    Path(path).write_text(dumps(data) + "\n")


def read_solution(path) -> dict:
    return json.loads(Path(path).read_text())
