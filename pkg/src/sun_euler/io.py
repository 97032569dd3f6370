"""JSON and CSV encodings for angle vectors and matrices.

Floats are written with 17 significant digits so that every double
round-trips exactly.  Matrices are row-major lists of ``[re, im]`` pairs.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .errors import NumericError, ParseError
from .group import EulerCoordinates, coordinate_layout


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise NumericError(f"non-finite value {x!r} cannot be serialized")
    return format(x, ".17g")


def dumps(obj) -> str:
    """Compact JSON with every float printed at 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_pairs(m: np.ndarray) -> list:
    m = np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix must be a list of rows of [re, im] pairs: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError(f"matrix must have shape (n, n, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_json(n: int, m: np.ndarray) -> dict:
    return {"n": n, "matrix": matrix_to_pairs(m)}


def load_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def parse_angle_list(data, n: int, source: str = "<input>") -> np.ndarray:
    if not isinstance(data, list):
        raise ParseError(f"{source}: field 'angles' must be a list, got {type(data).__name__}")
    layout = coordinate_layout(n)
    if len(data) != len(layout):
        raise ParseError(f"{source}: field 'angles' needs {len(layout)} values for SU({n}), got {len(data)}")
    out = np.empty(len(data))
    for i, v in enumerate(data):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"{source}: angles[{i}] ({layout[i].name}) is not a number: {v!r}")
        out[i] = float(v)
    return out


def parse_coordinates(text: str, source: str = "<input>", n: int | None = None) -> EulerCoordinates:
    """Parse ``{"n": int, "angles": [...]}``; a bare list is accepted when ``n`` is given."""
    data = load_json(text, source)
    if isinstance(data, list):
        if n is None:
            raise ParseError(f"{source}: a bare angle list needs --n")
        return EulerCoordinates(n, parse_angle_list(data, n, source))
    if not isinstance(data, dict):
        raise ParseError(f"{source}: expected an object with fields 'n' and 'angles'")
    if "n" not in data or not isinstance(data["n"], int) or isinstance(data["n"], bool):
        raise ParseError(f"{source}: field 'n' must be an integer")
    if n is not None and data["n"] != n:
        raise ParseError(f"{source}: field 'n' is {data['n']} but --n is {n}")
    if "angles" not in data:
        raise ParseError(f"{source}: missing field 'angles'")
    if data["n"] < 2:
        raise ParseError(f"{source}: field 'n' must be >= 2")
    return EulerCoordinates(data["n"], parse_angle_list(data["angles"], data["n"], source))


def angles_to_csv(n: int, angles: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([s.name for s in coordinate_layout(n)])
    for row in np.atleast_2d(angles):
        w.writerow([format_float(v) for v in row])
    return buf.getvalue()


def csv_to_angles(text: str, n: int) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    names = [s.name for s in coordinate_layout(n)]
    if not rows or rows[0] != names:
        raise ParseError("line 1: header does not match the SU(n) angle layout")
    return _float_rows(rows[1:], len(names))


def _matrix_header(n: int) -> list[str]:
    return [f"{p}_{i}_{j}" for i in range(n) for j in range(n) for p in ("re", "im")]


def matrices_to_csv(n: int, mats: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_matrix_header(n))
    for m in mats:
        flat = np.stack([m.real, m.imag], axis=-1).reshape(-1)
        w.writerow([format_float(v) for v in flat])
    return buf.getvalue()


def csv_to_matrices(text: str, n: int) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != _matrix_header(n):
        raise ParseError(f"line 1: header does not match an SU({n}) matrix")
    vals = _float_rows(rows[1:], 2 * n * n)
    pairs = vals.reshape(len(vals), n, n, 2)
    return pairs[..., 0] + 1j * pairs[..., 1]


def _float_rows(rows, width: int) -> np.ndarray:
    out = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        line = i + 2
        if len(row) != width:
            raise ParseError(f"line {line}: expected {width} fields, got {len(row)}")
        for j, field in enumerate(row):
            try:
                out[i, j] = float(field)
            except ValueError:
                raise ParseError(f"line {line}, field {j + 1}: not a number: {field!r}") from None
    return out

