"""Random test instances: unitaries, Hermitian matrices, states and CHSH configurations.

All generators take a ``numpy.random.Generator`` so suites are reproducible.
"""

from __future__ import annotations

import numpy as np

from . import matrix as mc
from .chsh import ChshConfig
from .lhv import DeterministicStrategy, MixedStrategy, all_deterministic_strategies
from .states import (
    DensityMatrix,
    SeparableDecomposition,
    density_from_matrix,
    density_from_separable,
)


def ginibre(rng: np.random.Generator, n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return (rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))) / np.sqrt(2.0)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix."""
    q, r = np.linalg.qr(ginibre(rng, n))
    d = np.diagonal(r)
    return mc.as_matrix(q * (d / np.abs(d)))


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    m = ginibre(rng, n)
    return mc.as_matrix(scale * 0.5 * (m + m.conj().T))


def random_degenerate_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    """Hermitian matrix with repeated eigenvalues drawn from a small integer set."""
    evals = rng.integers(-2, 3, size=n).astype(float)
    u = random_unitary(rng, n)
    return mc.as_matrix((u * evals) @ u.conj().T)


def random_ket(rng: np.random.Generator, n: int) -> np.ndarray:
    v = ginibre(rng, n, 1)
    return mc.as_matrix(v / np.linalg.norm(v))


def random_density(rng: np.random.Generator, n: int, rank: int | None = None) -> DensityMatrix:
    """``G G^dagger / trace`` for an ``n x rank`` Ginibre ``G`` (full rank by default)."""
    rank = n if rank is None else rank
    g = ginibre(rng, n, rank)
    m = g @ g.conj().T
    return density_from_matrix(m / np.trace(m).real)


def random_pure_density(rng: np.random.Generator, n: int) -> DensityMatrix:
    return random_density(rng, n, rank=1)


def random_involution(rng: np.random.Generator, n: int, signs=None) -> np.ndarray:
    """Hermitian ``U diag(+-1) U^dagger``; random sign pattern unless given."""
    if signs is None:
        signs = rng.choice([-1.0, 1.0], size=n)
    u = random_unitary(rng, n)
    a = (u * np.asarray(signs, dtype=float)) @ u.conj().T
    return mc.as_matrix(0.5 * (a + a.conj().T))


def random_local_config(rng: np.random.Generator, n: int, m: int) -> ChshConfig:
    return ChshConfig.local_tensor(
        random_involution(rng, n),
        random_involution(rng, n),
        random_involution(rng, m),
        random_involution(rng, m),
    )


def random_commuting_config(rng: np.random.Generator, n: int, m: int) -> ChshConfig:
    """Commuting-pairs configuration on ``n * m`` dims, conjugated by a global unitary.

    The global conjugation hides the tensor structure from the computational
    basis while preserving every cross commutation.
    """
    local = random_local_config(rng, n, m)
    w = random_unitary(rng, n * m)

    def conj(x):
        y = w @ x @ w.conj().T
        return 0.5 * (y + y.conj().T)

    return ChshConfig(conj(local.A0), conj(local.A1), conj(local.B0), conj(local.B1))


def random_one_commuting_config(rng: np.random.Generator, n: int, m: int) -> ChshConfig:
    """Local configuration where Alice's two observables share an eigenbasis."""
    u = random_unitary(rng, n)
    a0 = (u * rng.choice([-1.0, 1.0], size=n)) @ u.conj().T
    a1 = (u * rng.choice([-1.0, 1.0], size=n)) @ u.conj().T
    herm = lambda a: 0.5 * (a + a.conj().T)  # noqa: E731
    if rng.random() < 0.5:
        return ChshConfig.local_tensor(
            herm(a0), herm(a1), random_involution(rng, m), random_involution(rng, m)
        )
    # same construction on Bob's side instead
    v = random_unitary(rng, m)
    b0 = (v * rng.choice([-1.0, 1.0], size=m)) @ v.conj().T
    b1 = (v * rng.choice([-1.0, 1.0], size=m)) @ v.conj().T
    return ChshConfig.local_tensor(
        random_involution(rng, n), random_involution(rng, n), herm(b0), herm(b1)
    )


def random_separable_decomposition(
    rng: np.random.Generator, n: int, m: int, terms: int | None = None
) -> SeparableDecomposition:
    terms = int(rng.integers(1, 5)) if terms is None else terms
    w = rng.dirichlet(np.ones(terms))
    return SeparableDecomposition(
        tuple(
            (float(w[k]), random_density(rng, n, rank=int(rng.integers(1, n + 1))),
             random_density(rng, m, rank=int(rng.integers(1, m + 1))))
            for k in range(terms)
        )
    )


def random_separable_density(rng: np.random.Generator, n: int, m: int) -> DensityMatrix:
    return density_from_separable(random_separable_decomposition(rng, n, m))


def random_mixed_strategy(rng: np.random.Generator) -> MixedStrategy:
    strategies = all_deterministic_strategies()
    k = int(rng.integers(1, len(strategies) + 1))
    picks = rng.choice(len(strategies), size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    return MixedStrategy(tuple((float(wi), strategies[int(p)]) for wi, p in zip(w, picks)))


def random_deterministic_strategy(rng: np.random.Generator) -> DeterministicStrategy:
    return DeterministicStrategy(*(int(v) for v in rng.choice([-1, 1], size=4)))


def random_factor_dims(rng: np.random.Generator, max_total: int = 16) -> tuple[int, int]:
    pairs = [(n, m) for n in range(1, 9) for m in range(1, 9) if n * m <= max_total and n * m >= 2]
    return pairs[int(rng.integers(len(pairs)))]
