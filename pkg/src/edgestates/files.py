"""JSON matrix files and certification reports.

Matrix file::

    {"format": "edgestates-matrix", "version": 1, "m": 3, "n": 3,
     "data": [[[re, im], ...], ...], "metadata": {...}}

Complex numbers are ``[re, im]`` pairs; floats are written with ``repr``
precision so a write/read cycle reproduces the array bit for bit.
"""

import json
import math

import numpy as np

from .blocks import BlockMatrix
from .exceptions import ShapeError

MATRIX_FORMAT = "edgestates-matrix"
REPORT_FORMAT = "edgestates-report"
FORMAT_VERSION = 1


class MatrixFileError(ValueError):
    """The file is not a well-formed matrix document."""


def _pair(z):
    return [float(z.real), float(z.imag)]


def _float_or_text(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def complex_to_json(z):
    return None if z is None else [_float_or_text(z.real), _float_or_text(z.imag)]


def vector_to_json(v):
    return [_pair(z) for z in np.asarray(v, dtype=np.complex128).ravel()]


def parse_complex(value):
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise MatrixFileError(f"cannot read complex number from {value!r}")


def parse_vector(values):
    return np.array([parse_complex(v) for v in values], dtype=np.complex128)


def matrix_to_document(a, metadata=None):
    return {
        "format": MATRIX_FORMAT,
        "version": FORMAT_VERSION,
        "m": a.m,
        "n": a.n,
        "data": [[_pair(z) for z in row] for row in a.data],
        "metadata": dict(metadata or {}),
    }


def matrix_from_document(doc):
    if not isinstance(doc, dict):
        raise MatrixFileError("matrix document must be a JSON object")
    try:
        m, n, rows = int(doc["m"]), int(doc["n"]), doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFileError(f"missing or invalid field: {exc}") from None
    try:
        data = np.array([[parse_complex(z) for z in row] for row in rows], dtype=np.complex128)
    except TypeError as exc:
        raise MatrixFileError(f"malformed data array: {exc}") from None
    try:
        return BlockMatrix(m, n, data), dict(doc.get("metadata") or {})
    except (ShapeError, ValueError) as exc:
        raise MatrixFileError(str(exc)) from None


def write_matrix(path, a, metadata=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_document(a, metadata), fh, indent=1)
        fh.write("\n")


def read_matrix(path):
    """Return ``(BlockMatrix, metadata)``."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MatrixFileError(f"{path}: not valid JSON ({exc})") from None
    return matrix_from_document(doc)


def report_to_document(report, tol, cfg, version, source=None, metadata=None):
    edge = report.edge
    return {
        "format": REPORT_FORMAT,
        "version": FORMAT_VERSION,
        "tool_version": version,
        "source": source,
        "metadata": dict(metadata or {}),
        "tolerance": tol.as_dict(),
        "config": cfg.as_dict(),
        "ppt": {
            "is_ppt": report.ppt.is_ppt,
            "min_eig_A": report.ppt.min_eig_A,
            "min_eig_Atau": report.ppt.min_eig_Atau,
            "norm_scale": report.ppt.norm_scale,
        },
        "s": report.s,
        "t": report.t,
        "pairing_value": complex_to_json(report.pairing_value),
        "dual_face_member": report.dual_face_member,
        "edge": {
            "verdict": edge.verdict.value,
            "min_objective": _float_or_text(edge.min_objective),
            "best_x": vector_to_json(edge.best_x),
            "best_y": vector_to_json(edge.best_y),
            "restarts_run": edge.restarts_run,
            "seed": edge.seed,
            "per_restart_minima": [_float_or_text(v) for v in edge.per_restart_minima],
        },
    }
