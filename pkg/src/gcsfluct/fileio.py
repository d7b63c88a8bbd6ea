"""Text formats read by the CLI: matrix documents and flat key-value configs.

Matrix document (JSON)::

    {"n": 1, "kind": "gcs", "matrix": [16 numbers, row-major]}

kind is one of gcs (4n x 4n), omega, J, B (2n x 2n); it defaults to gcs.
The matrix may also be given as a list of rows.

Config (one ``key = value`` per line, ``#`` comments, no sections)::

    T = 1.0
    C_V = 1.5
    scheme = tensor-grid
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

KINDS = {"gcs": 4, "omega": 2, "J": 2, "B": 2}

CONFIG_KEYS = {
    "T": float, "V": float, "P": float, "S": float, "C_V": float, "dPdV_T": float,
    "k_B": float, "S0": float, "P0": float, "V0": float, "T0": float,
    "scheme": str, "points": int, "truncation": float, "seed": int,
    "g_TT": float, "g_VV": float,
}


class FormatError(ValueError):
    """Malformed input document (a usage error, not a domain failure)."""


def parse_matrix_document(text: str) -> tuple[str, int, np.ndarray]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"matrix document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "matrix" not in doc:
        raise FormatError("matrix document needs fields 'n' and 'matrix'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"'n' must be a positive integer, got {n!r}")
    kind = doc.get("kind", "gcs")
    if kind not in KINDS:
        raise FormatError(f"unknown matrix kind {kind!r}; expected one of {sorted(KINDS)}")
    size = KINDS[kind] * n
    try:
        arr = np.array(doc["matrix"], dtype=float)
    except (TypeError, ValueError):
        raise FormatError("'matrix' must hold numbers only") from None
    if arr.size != size * size or arr.ndim not in (1, 2):
        raise FormatError(f"{kind} matrix for n={n} needs {size}x{size} entries, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError("matrix entries must be finite")
    return kind, n, arr.reshape(size, size)


def read_matrix_document(path) -> tuple[str, int, np.ndarray]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix_document(text)


def write_matrix_document(path, mat, kind: str = "gcs") -> None:
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0] // KINDS[kind]
    doc = {"n": n, "kind": kind, "matrix": [float(x) for x in mat.ravel()]}
    Path(path).write_text(json.dumps(doc) + "\n")


def parse_config(text: str) -> dict:
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") or "=" not in line:
            raise FormatError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise FormatError(f"line {lineno}: unknown key {key!r}")
        if value.startswith(("[", "{")):
            raise FormatError(f"line {lineno}: nested values are not supported")
        try:
            cfg[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise FormatError(f"line {lineno}: bad value {value!r} for {key}") from None
    return cfg


def read_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def fmt(x: float) -> str:
    """17 significant digits: round-trips any float64."""
    return format(float(x), ".17g")
