"""JSON file formats for matrices and Kraus families.

A matrix file is ``{"rows": r, "cols": c, "re": [...], "im": [...]}``
with row-major real and imaginary parts. A family file is
``{"n": n, "pairs": [{"a": <matrix>, "b": <matrix>}, ...]}``.
Floats are written with ``repr``, which round-trips bit for bit.
"""
from __future__ import annotations

import json
import sys
from typing import Any, Dict

import numpy as np

from .linalg import as_cmat
from .pert import KrausFamily

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "family_to_json",
    "family_from_json",
    "load_json",
    "dumps",
]


def matrix_to_json(m) -> Dict[str, Any]:
    m = as_cmat(m)
    flat = m.ravel()
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ValueError("matrix must be a JSON object")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", [0.0] * (rows * cols)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    if re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise ValueError(f"re/im must each hold {rows * cols} numbers")
    return as_cmat((re + 1j * im).reshape(rows, cols))


def family_to_json(f: KrausFamily) -> Dict[str, Any]:
    return {
        "n": f.n,
        "pairs": [{"a": matrix_to_json(a), "b": matrix_to_json(b)} for a, b in f.pairs],
    }


def family_from_json(obj) -> KrausFamily:
    if not isinstance(obj, dict) or "pairs" not in obj or "n" not in obj:
        raise ValueError("family must be an object with 'n' and 'pairs'")
    pairs = []
    for entry in obj["pairs"]:
        if not isinstance(entry, dict) or "a" not in entry or "b" not in entry:
            raise ValueError("each pair must be an object with 'a' and 'b'")
        pairs.append((matrix_from_json(entry["a"]), matrix_from_json(entry["b"])))
    return KrausFamily(int(obj["n"]), tuple(pairs))


def load_json(path: str):
    """Read JSON from a file path, or from stdin when path is ``-``."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)
