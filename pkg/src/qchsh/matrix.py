"""Dense complex matrix arithmetic.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with two
dimensions. Kets are ``n x 1`` columns and bras are their adjoints. Every
function here validates its inputs through :func:`as_matrix`, which rejects
empty shapes and non-finite entries and returns a read-only array, so values
can be shared freely.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DimensionError, MatrixFormatError

DEFAULT_ATOL = 1e-10


def as_matrix(obj: Any) -> np.ndarray:
    """Convert ``obj`` to a validated, read-only complex matrix.

    One-dimensional input is read as a column vector.
    """
    arr = np.array(obj, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"matrix dimensions must be positive, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or infinite entries")
    arr.setflags(write=False)
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _require_square(a: np.ndarray, what: str = "matrix") -> int:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {a.shape}")
    return a.shape[0]


def _require_column(u: np.ndarray) -> None:
    if u.shape[1] != 1:
        raise DimensionError(f"expected a column vector, got shape {u.shape}")


def identity(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError("identity dimension must be >= 1")
    return _frozen(np.eye(n, dtype=np.complex128))


def zeros(rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise DimensionError("matrix dimensions must be positive")
    return _frozen(np.zeros((rows, cols), dtype=np.complex128))


def basis_ket(n: int, i: int) -> np.ndarray:
    """The ``i``-th computational basis column of dimension ``n``."""
    if not 0 <= i < n:
        raise DimensionError(f"basis index {i} out of range for dimension {n}")
    v = np.zeros((n, 1), dtype=np.complex128)
    v[i, 0] = 1.0
    return _frozen(v)


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot add shapes {a.shape} and {b.shape}")
    return _frozen(a + b)


def subtract(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot subtract shapes {a.shape} and {b.shape}")
    return _frozen(a - b)


def scale(c: complex, a) -> np.ndarray:
    c = complex(c)
    if not np.isfinite(c):
        raise ValueError("scalar must be finite")
    return _frozen(c * as_matrix(a))


def mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return _frozen(a @ b)


def matmul_chain(*mats) -> np.ndarray:
    """Left-to-right product of several conformable matrices."""
    if not mats:
        raise DimensionError("need at least one matrix")
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = mul(out, m)
    return out


def adjoint(a) -> np.ndarray:
    return _frozen(as_matrix(a).conj().T.copy())


def trace(a) -> complex:
    a = as_matrix(a)
    _require_square(a)
    return complex(np.trace(a))


def tensor(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return _frozen(np.kron(as_matrix(a), as_matrix(b)))


def tensor_all(*mats) -> np.ndarray:
    if not mats:
        raise DimensionError("need at least one matrix")
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = tensor(out, m)
    return out


def inner(u, v) -> complex:
    """``<u|v> = sum(conj(u_i) * v_i)``."""
    u, v = as_matrix(u), as_matrix(v)
    _require_column(u)
    _require_column(v)
    if u.shape != v.shape:
        raise DimensionError(f"vector lengths differ: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u[:, 0], v[:, 0]))


def outer(u, v) -> np.ndarray:
    """``|u><v|``, the matrix with entries ``u_i * conj(v_j)``."""
    u, v = as_matrix(u), as_matrix(v)
    _require_column(u)
    _require_column(v)
    return _frozen(u @ v.conj().T)


def vec_norm(u) -> float:
    u = as_matrix(u)
    _require_column(u)
    return float(np.sqrt(max(inner(u, u).real, 0.0)))


def max_abs(a) -> float:
    """Entrywise max-norm."""
    return float(np.max(np.abs(as_matrix(a))))


def allclose(a, b, atol: float = DEFAULT_ATOL) -> bool:
    """Approximate equality: same shape and entrywise ``|a - b| <= atol``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= atol)


# --- text format -----------------------------------------------------------

def matrix_to_json(a) -> dict:
    """Serialize to ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` (row-major)."""
    a = as_matrix(a)
    flat = a.reshape(-1)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(doc: Any) -> np.ndarray:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MatrixFormatError("matrix document must be a JSON object")
    try:
        rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    except KeyError as exc:
        raise MatrixFormatError(f"missing field {exc}") from exc
    if not (isinstance(rows, int) and isinstance(cols, int)) or isinstance(rows, bool) or isinstance(cols, bool):
        raise MatrixFormatError("rows and cols must be integers")
    if rows < 1 or cols < 1:
        raise MatrixFormatError("rows and cols must be positive")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(
            f"data must hold rows*cols = {rows * cols} entries"
        )
    values = []
    for entry in data:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
        ):
            raise MatrixFormatError(f"entry {entry!r} is not a [re, im] pair")
        re, im = float(entry[0]), float(entry[1])
        if not (np.isfinite(re) and np.isfinite(im)):
            raise MatrixFormatError("non-finite entry in matrix data")
        values.append(complex(re, im))
    return as_matrix(np.array(values, dtype=np.complex128).reshape(rows, cols))


def load_matrix(path: str | Path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    return matrix_from_json(text)


def dump_matrix(a, path: str | Path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)))
