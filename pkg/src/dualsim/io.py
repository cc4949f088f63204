"""JSON encodings for matrices, state vectors and unitary combinations."""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import DualityError


class FormatError(DualityError):
    """Malformed JSON input; reported under the ``E_SYNTAX`` code."""

    def __init__(self, message: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"E_SYNTAX{where}: {message}")
        self.line = line


def _pair(x: complex) -> list[float]:
    return [float(x.real), float(x.imag)]


def _complex(pair, where: str) -> complex:
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
    ):
        raise FormatError(f"{where}: expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_json(m: np.ndarray) -> dict[str, Any]:
    m = np.asarray(m)
    return {"rows": m.shape[0], "cols": m.shape[1], "entries": [_pair(x) for x in m.reshape(-1)]}


def matrix_from_json(obj: Any) -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= obj.keys():
        raise FormatError("matrix JSON must be an object with rows, cols and entries")
    rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 1 and cols >= 1):
        raise FormatError("rows and cols must be positive integers")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise FormatError(f"entries must be a list of {rows * cols} [re, im] pairs")
    values = [_complex(p, f"entry {i}") for i, p in enumerate(entries)]
    return np.array(values, dtype=complex).reshape(rows, cols)


def state_to_json(psi: np.ndarray) -> list[list[float]]:
    return [_pair(x) for x in np.asarray(psi)]


def state_from_json(obj: Any) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise FormatError("state JSON must be a non-empty array of [re, im] pairs")
    return np.array([_complex(p, f"amplitude {i}") for i, p in enumerate(obj)], dtype=complex)


def combination_to_json(comb) -> list[dict[str, Any]]:
    return [{"coefficient": c, "unitary": matrix_to_json(v)} for c, v in comb.terms]


def dumps(obj: Any) -> str:
    """Serialize with floats at 17 significant digits; key order is preserved."""
    return _encode(obj) + "\n"


def _encode(obj: Any) -> str:
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot encode non-finite float {x!r}")
        return format(x, ".17g")
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")
