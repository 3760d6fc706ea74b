"""JSON reading and writing for polytopes, certificates and reports."""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from .core import GeometryError, HPolytope, VPolytope


def load(path: str | Path) -> dict:
    if str(path) == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def hpolytope_from_json(doc: dict) -> HPolytope:
    if "hrep" not in doc:
        raise GeometryError("instance has no 'hrep' section")
    rows = doc["hrep"]
    H = HPolytope(np.array([r["a"] for r in rows], dtype=float),
                  np.array([r["b"] for r in rows], dtype=float))
    if "dim" in doc and H.dim != int(doc["dim"]):
        raise GeometryError(f"declared dim {doc['dim']} but normals have length {H.dim}")
    return H


def vpolytope_from_json(doc: dict) -> VPolytope:
    if "vrep" not in doc:
        raise GeometryError("instance has no 'vrep' section")
    V = VPolytope(np.array(doc["vrep"], dtype=float))
    if "dim" in doc and V.dim != int(doc["dim"]):
        raise GeometryError(f"declared dim {doc['dim']} but points have length {V.dim}")
    return V


def hpolytope_to_json(H: HPolytope) -> dict:
    return {"dim": H.dim, "hrep": [{"a": a.tolist(), "b": float(b)} for a, b in zip(H.A, H.b)]}


def vpolytope_to_json(V: VPolytope) -> dict:
    return {"dim": V.dim, "vrep": V.points.tolist()}


def plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and enums to JSON types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if hasattr(obj, "value") and not isinstance(obj, str):
        return obj.value
    return obj


def dumps(obj: Any) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(plain(obj), indent=2, allow_nan=False) + "\n"


def dump(obj: Any, path: str | Path | None) -> str:
    text = dumps(obj)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
    return text
