"""Density matrices, ensembles, separable constructions and unitary evolution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matrix as mc
from .errors import (
    DimensionError,
    EnsembleError,
    InternalInvariantError,
    NotPositiveError,
    PreconditionError,
    SeparableError,
    TraceError,
)
from .spectral import HERMITIAN_ATOL, is_hermitian, is_unitary, real_diag_decomp

STATE_ATOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A validated positive semidefinite, unit-trace matrix.

    Build instances through :func:`density_from_matrix` or the other
    constructors in this module; the plain constructor does not validate.
    ``factors`` records ``(n, m)`` when the state was built as a convex
    mixture of product states, which is the only way a state is tagged
    separable.
    """

    mat: np.ndarray
    factors: tuple[int, int] | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def separable(self) -> bool:
        return self.factors is not None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


@dataclass(frozen=True)
class Ensemble:
    """Weighted pure states ``[(weight, ket), ...]``."""

    entries: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "entries",
            tuple((float(w), mc.as_matrix(v)) for w, v in self.entries),
        )


@dataclass(frozen=True)
class SeparableDecomposition:
    """Convex mixture ``[(weight, left_density, right_density), ...]``."""

    entries: tuple[tuple[float, DensityMatrix, DensityMatrix], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))

    @property
    def dims(self) -> tuple[int, int]:
        _, left, right = self.entries[0]
        return left.dim, right.dim


def density_from_matrix(m, tol: float = STATE_ATOL) -> DensityMatrix:
    """Validate ``m`` as a density matrix.

    Eigenvalues down to ``-tol`` are accepted and a trace within ``tol`` of 1
    is renormalized to exactly 1.
    """
    if isinstance(m, DensityMatrix):
        return m
    m = mc.as_matrix(m)
    mc._require_square(m)
    if not is_hermitian(m, tol):
        raise NotPositiveError("matrix is not Hermitian, hence not positive")
    if real_diag_decomp(m, tol=tol).eigenvalues[-1] < -tol:
        raise NotPositiveError("matrix has a negative eigenvalue")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise TraceError(f"trace is {tr.real:.12g}, expected 1")
    herm = 0.5 * (m + m.conj().T)
    return DensityMatrix(mc.as_matrix(herm / tr.real))


def as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else density_from_matrix(rho)


def pure_density(ket) -> DensityMatrix:
    ket = mc.as_matrix(ket)
    if abs(mc.vec_norm(ket) - 1.0) > STATE_ATOL:
        raise PreconditionError("ket is not normalized")
    return density_from_matrix(mc.outer(ket, ket))


def density_from_ensemble(e: Ensemble, tol: float = STATE_ATOL) -> DensityMatrix:
    if not e.entries:
        raise EnsembleError("ensemble is empty")
    dim = e.entries[0][1].shape[0]
    total = 0.0
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for w, v in e.entries:
        if v.shape != (dim, 1):
            raise EnsembleError(f"state vector shape {v.shape} differs from ({dim}, 1)")
        if not -tol <= w <= 1.0 + tol:
            raise EnsembleError(f"weight {w} outside [0, 1]")
        if abs(mc.vec_norm(v) - 1.0) > tol:
            raise EnsembleError("state vector is not normalized")
        total += w
        acc += max(w, 0.0) * (v @ v.conj().T)
    if abs(total - 1.0) > tol:
        raise EnsembleError(f"weights sum to {total}, expected 1")
    return density_from_matrix(acc, tol=tol)


def ensemble_from_density(rho: DensityMatrix) -> Ensemble:
    """Eigen-ensemble of ``rho``: eigenvalues as weights, eigenvectors as states."""
    rho = as_density(rho)
    dec = real_diag_decomp(rho.mat)
    weights = np.clip(dec.eigenvalues, 0.0, None)
    weights = weights / weights.sum()
    return Ensemble(tuple((float(w), dec.column(i)) for i, w in enumerate(weights)))


def purity(rho: DensityMatrix) -> float:
    """``trace(rho @ rho)``."""
    m = as_density(rho).mat
    return float(np.trace(m @ m).real)


def is_pure(rho: DensityMatrix, tol: float = STATE_ATOL) -> bool:
    """``rho @ rho == rho`` within ``tol``; cross-checked against ``trace(rho^2) == 1``."""
    m = as_density(rho).mat
    idempotent = bool(np.max(np.abs(m @ m - m)) <= tol)
    unit_purity = abs(purity(rho) - 1.0) <= tol
    if idempotent != unit_purity:
        raise InternalInvariantError(
            "purity criteria disagree; state is within tolerance of the boundary"
        )
    return idempotent


def max_mixed(n: int) -> DensityMatrix:
    if n < 1:
        raise DimensionError("dimension must be >= 1")
    return DensityMatrix(mc.as_matrix(np.eye(n) / n))


def density_from_separable(
    s: SeparableDecomposition, tol: float = STATE_ATOL
) -> DensityMatrix:
    """``sum_i w_i * left_i (x) right_i``, tagged separable with factor dims ``(n, m)``."""
    if not s.entries:
        raise SeparableError("separable decomposition is empty")
    for _, left, right in s.entries:
        if not (isinstance(left, DensityMatrix) and isinstance(right, DensityMatrix)):
            raise SeparableError("factors must be DensityMatrix instances")
    n, m = s.dims
    total = 0.0
    acc = np.zeros((n * m, n * m), dtype=np.complex128)
    for w, left, right in s.entries:
        if (left.dim, right.dim) != (n, m):
            raise SeparableError("all terms must share the same factor dimensions")
        if not -tol <= w <= 1.0 + tol:
            raise SeparableError(f"weight {w} outside [0, 1]")
        total += w
        acc += max(w, 0.0) * np.kron(left.mat, right.mat)
    if abs(total - 1.0) > tol:
        raise SeparableError(f"weights sum to {total}, expected 1")
    rho = density_from_matrix(acc, tol=tol)
    return DensityMatrix(rho.mat, factors=(n, m))


def product_density(left: DensityMatrix, right: DensityMatrix) -> DensityMatrix:
    return density_from_separable(SeparableDecomposition(((1.0, left, right),)))


def evolve(u, rho: DensityMatrix, tol: float = HERMITIAN_ATOL) -> DensityMatrix:
    """``U rho U^dagger`` for a unitary ``U``."""
    u = mc.as_matrix(u)
    rho = as_density(rho)
    if u.shape != rho.mat.shape:
        raise DimensionError(f"unitary shape {u.shape} does not match state dim {rho.dim}")
    if not is_unitary(u, tol):
        raise PreconditionError("evolution operator is not unitary")
    return density_from_matrix(u @ rho.mat @ u.conj().T)


# --- named constants -------------------------------------------------------

_S = 1.0 / math.sqrt(2.0)

KET0 = mc.as_matrix([[1.0], [0.0]])
KET1 = mc.as_matrix([[0.0], [1.0]])
PLUS = mc.as_matrix([[_S], [_S]])
MINUS = mc.as_matrix([[_S], [-_S]])

PHI_PLUS = mc.as_matrix(np.array([[1.0], [0.0], [0.0], [1.0]]) * _S)
PHI_MINUS = mc.as_matrix(np.array([[1.0], [0.0], [0.0], [-1.0]]) * _S)
PSI_PLUS = mc.as_matrix(np.array([[0.0], [1.0], [1.0], [0.0]]) * _S)
PSI_MINUS = mc.as_matrix(np.array([[0.0], [1.0], [-1.0], [0.0]]) * _S)

HADAMARD = mc.as_matrix(np.array([[1.0, 1.0], [1.0, -1.0]]) * _S)
CNOT = mc.as_matrix(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
)
PAULI_X = mc.as_matrix([[0, 1], [1, 0]])
PAULI_Z = mc.as_matrix([[1, 0], [0, -1]])


def standard_kets() -> dict[str, np.ndarray]:
    return {"ket0": KET0, "ket1": KET1, "plus": PLUS, "minus": MINUS}


def bell_states() -> dict[str, np.ndarray]:
    return {"phi+": PHI_PLUS, "phi-": PHI_MINUS, "psi+": PSI_PLUS, "psi-": PSI_MINUS}


def bell_densities() -> dict[str, DensityMatrix]:
    return {name: pure_density(k) for name, k in bell_states().items()}


def named_state(name: str) -> DensityMatrix:
    """Resolve a registry identifier such as ``"plus"``, ``"psi-"`` or ``"maxmix:4"``."""
    if name.startswith("maxmix:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError as exc:
            raise KeyError(f"bad maxmix dimension in {name!r}") from exc
        return max_mixed(n)
    kets = {**standard_kets(), **bell_states()}
    if name not in kets:
        raise KeyError(f"unknown state {name!r}")
    return pure_density(kets[name])
