"""Hermitian eigendecomposition, spectra, singular values and the L2 operator norm.

The eigensolver is a cyclic Jacobi method with complex plane rotations. Each
rotation first removes the phase of the pivot ``a[p, q]`` with a diagonal
unitary, then applies the usual real Jacobi rotation, so the accumulated
transform stays unitary and the diagonal stays real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matrix as mc
from .errors import ConvergenceError, InternalInvariantError, PreconditionError

HERMITIAN_ATOL = 1e-10
JACOBI_RTOL = 1e-12
MAX_SWEEPS = 100
GROUPING_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralDecomposition:
    """``A = U @ diag(eigenvalues) @ U^dagger`` with ``U`` unitary.

    Eigenvalues are sorted in descending order and ``U``'s columns follow
    the same order.
    """

    U: np.ndarray
    eigenvalues: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return mc.as_matrix((self.U * self.eigenvalues) @ self.U.conj().T)

    def column(self, i: int) -> np.ndarray:
        return mc.as_matrix(self.U[:, [i]])


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    projector: np.ndarray
    multiplicity: int


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[SpectrumEntry, ...]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(e.eigenvalue for e in self.entries)

    @property
    def projectors(self) -> tuple[np.ndarray, ...]:
        return tuple(e.projector for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def is_hermitian(a, tol: float = HERMITIAN_ATOL) -> bool:
    a = mc.as_matrix(a)
    mc._require_square(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(u, tol: float = HERMITIAN_ATOL) -> bool:
    u = mc.as_matrix(u)
    n = mc._require_square(u)
    eye = np.eye(n)
    return bool(
        np.max(np.abs(u.conj().T @ u - eye)) <= tol
        and np.max(np.abs(u @ u.conj().T - eye)) <= tol
    )


def is_positive_semidefinite(a, tol: float = HERMITIAN_ATOL) -> bool:
    a = mc.as_matrix(a)
    mc._require_square(a)
    if not is_hermitian(a, tol):
        return False
    return bool(real_diag_decomp(a, tol=tol).eigenvalues[-1] >= -tol)


def is_projector(p, tol: float = HERMITIAN_ATOL) -> bool:
    """Orthogonal projector test: ``P = P^dagger`` and ``P @ P = P``."""
    p = mc.as_matrix(p)
    if p.shape[0] != p.shape[1]:
        return False
    return is_hermitian(p, tol) and bool(np.max(np.abs(p @ p - p)) <= tol)


def _jacobi(a: np.ndarray, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128)
    # symmetrize away sub-tolerance skew parts
    a = 0.5 * (a + a.conj().T)
    u = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), u
    threshold = JACOBI_RTOL * max(1.0, float(np.linalg.norm(a)))
    off_mask = ~np.eye(n, dtype=bool)
    # pivots this small cannot keep the off-diagonal norm above threshold
    skip = 1e-3 * threshold / n
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[off_mask]) ** 2)))
        if off < threshold:
            return a.diagonal().copy(), u
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                r = abs(apq)
                if r <= skip:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # V = diag(1, conj(ph)) @ [[c, s], [-s, c]]; A <- V^+ A V, U <- U V
                sp, cp = s * ph.conjugate(), c * ph.conjugate()
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - sp * col_q
                a[:, q] = s * col_p + cp * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * ph * row_q
                a[q, :] = s * row_p + c * ph * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                u_p, u_q = u[:, p].copy(), u[:, q].copy()
                u[:, p] = c * u_p - sp * u_q
                u[:, q] = s * u_p + cp * u_q
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def real_diag_decomp(
    a, tol: float = HERMITIAN_ATOL, max_sweeps: int = MAX_SWEEPS
) -> SpectralDecomposition:
    """Unitary diagonalization of a Hermitian matrix.

    Raises
    ------
    PreconditionError
        If ``a`` is not Hermitian within ``tol``.
    ConvergenceError
        If the off-diagonal norm does not fall below
        ``1e-12 * max(1, ||a||_F)`` within ``max_sweeps`` sweeps.
    """
    a = mc.as_matrix(a)
    mc._require_square(a)
    if not is_hermitian(a, tol):
        raise PreconditionError("matrix is not Hermitian")
    diag, u = _jacobi(a, max_sweeps)
    scale = max(1.0, float(np.max(np.abs(diag))))
    if np.max(np.abs(diag.imag)) > tol * scale:
        raise InternalInvariantError("eigenvalues have non-negligible imaginary parts")
    evals = diag.real
    order = np.argsort(-evals, kind="stable")
    return SpectralDecomposition(
        U=mc.as_matrix(u[:, order]), eigenvalues=mc._frozen(evals[order].copy())
    )


def spectrum(a, tol: float = HERMITIAN_ATOL) -> Spectrum:
    """Distinct eigenvalues of a Hermitian matrix with their eigenspace projectors.

    Eigenvalues closer than ``1e-8 * max(1, max|lambda|)`` to their neighbour
    are merged into one entry whose value is the group mean. Entries are
    ordered by descending eigenvalue.
    """
    dec = real_diag_decomp(a, tol=tol)
    evals = dec.eigenvalues
    gtol = GROUPING_RTOL * max(1.0, float(np.max(np.abs(evals))))
    groups: list[list[int]] = [[0]]
    for i in range(1, len(evals)):
        if evals[groups[-1][-1]] - evals[i] <= gtol:
            groups[-1].append(i)
        else:
            groups.append([i])
    entries = []
    for g in groups:
        cols = dec.U[:, g]
        entries.append(
            SpectrumEntry(
                eigenvalue=float(np.mean(evals[g])),
                projector=mc.as_matrix(cols @ cols.conj().T),
                multiplicity=len(g),
            )
        )
    return Spectrum(tuple(entries))


def singular_values(a) -> np.ndarray:
    """Square roots of the eigenvalues of ``a^dagger a``, descending."""
    a = mc.as_matrix(a)
    mc._require_square(a)
    gram = a.conj().T @ a
    evals = real_diag_decomp(0.5 * (gram + gram.conj().T)).eigenvalues
    return mc._frozen(np.sqrt(np.clip(evals, 0.0, None)))


def l2_op_norm(a) -> float:
    """Largest singular value, i.e. ``sup ||a v||`` over unit vectors ``v``."""
    return float(singular_values(a)[0])
