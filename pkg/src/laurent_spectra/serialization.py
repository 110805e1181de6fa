"""Deterministic JSON/CSV interchange for coefficients, specs, and clouds.

Floats are rendered with 17 significant digits in lowercase scientific
notation so identical inputs produce byte-identical artifacts that round-trip
doubles losslessly.  Writes go to a temporary file in the target directory
followed by an atomic rename.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ParseError
from .jacobi import PeriodicJacobiSpec
from .symbol import BlockLaurentCoefficients


def format_float(x):
    return f"{float(x):.16e}"


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def json_dumps(obj):
    """Serialize with fixed float formatting and insertion-order keys."""
    pieces = []
    _write_json(obj, pieces)
    return "".join(pieces) + "\n"


def _write_json(obj, pieces):
    if isinstance(obj, dict):
        pieces.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                pieces.append(", ")
            pieces.append(json.dumps(str(key)))
            pieces.append(": ")
            _write_json(value, pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple)):
        pieces.append("[")
        for i, value in enumerate(obj):
            if i:
                pieces.append(", ")
            _write_json(value, pieces)
        pieces.append("]")
    elif isinstance(obj, bool):
        pieces.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        pieces.append(format_float(obj))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif obj is None:
        pieces.append("null")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def atomic_write_text(path, text):
    """Write via a temp file in the same directory and an atomic rename."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _matrix_to_obj(block):
    return [[_pair(entry) for entry in row] for row in np.asarray(block)]


def _matrix_from_obj(obj, d, where):
    try:
        mat = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in obj]
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{where}: matrix entries must be [re, im] pairs") from exc
    if mat.shape != (d, d):
        raise ParseError(f"{where}: matrix has shape {mat.shape}, expected ({d}, {d})")
    return mat


def coefficients_to_obj(coeffs):
    return {
        "d": coeffs.d,
        "coeffs": {str(n): _matrix_to_obj(coeffs.coeffs[n]) for n in coeffs.support()},
    }


def coefficients_from_obj(obj):
    if not isinstance(obj, dict) or "d" not in obj or "coeffs" not in obj:
        raise ParseError('coefficient object needs keys "d" and "coeffs"')
    try:
        d = int(obj["d"])
    except (TypeError, ValueError) as exc:
        raise ParseError(f'invalid block dimension {obj["d"]!r}') from exc
    if d < 1:
        raise ParseError(f"block dimension must be positive, got {d}")
    if not isinstance(obj["coeffs"], dict):
        raise ParseError('"coeffs" must map indices to matrices')
    out = {}
    for key, mat in obj["coeffs"].items():
        try:
            n = int(key)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"coefficient key {key!r} is not an integer") from exc
        out[n] = _matrix_from_obj(mat, d, f"coefficient {key}")
    return BlockLaurentCoefficients(d, out)


def jacobi_to_obj(spec):
    entries = [
        {"r": r, "s": s, "re": v.real, "im": v.imag}
        for (r, s), v in sorted(spec.entries.items())
    ]
    return {"d": spec.d, "k": spec.k, "entries": entries}


def jacobi_from_obj(obj):
    if not isinstance(obj, dict) or not {"d", "k", "entries"} <= set(obj):
        raise ParseError('Jacobi object needs keys "d", "k" and "entries"')
    try:
        d, k = int(obj["d"]), int(obj["k"])
        entries = {
            (int(e["r"]), int(e["s"])): complex(e.get("re", 0.0), e.get("im", 0.0))
            for e in obj["entries"]
        }
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"malformed Jacobi entries: {exc}") from exc
    return PeriodicJacobiSpec(d, k, entries)


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def spectrum_to_obj(cloud):
    """Point-cloud schema: array of {curve, t, re, im}."""
    return [
        {
            "curve": int(cloud.curve_index[i]),
            "t": float(cloud.t[i]),
            "re": float(cloud.values[i].real),
            "im": float(cloud.values[i].imag),
        }
        for i in range(len(cloud))
    ]


def spectrum_to_csv(cloud):
    lines = ["curve,t,re,im"]
    for i in range(len(cloud)):
        lines.append(
            f"{int(cloud.curve_index[i])},"
            f"{format_float(cloud.t[i])},"
            f"{format_float(cloud.values[i].real)},"
            f"{format_float(cloud.values[i].imag)}"
        )
    return "\n".join(lines) + "\n"
