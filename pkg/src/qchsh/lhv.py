"""Local hidden-variable models on finite probability spaces, and classical CHSH strategies.

Probability spaces are finite: a list of labelled atoms with weights. The
almost-everywhere conditions of the measure-theoretic definition become
conditions on every atom of positive weight. A random-variable family is a
mapping from eigenvalues of an observable to per-atom values::

    X = {1.0: {"w0": 0.25, "w1": 1.0}, -1.0: {"w0": 0.75, "w1": 0.0}}
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np

from . import matrix as mc
from .chsh import ChshConfig
from .errors import InternalInvariantError, ModelError, RangeError
from .spectral import Spectrum, spectrum
from .states import DensityMatrix, SeparableDecomposition, as_density, density_from_separable

LHV_ATOL = 1e-8
KEY_ATOL = 1e-8

RandomVariables = Mapping[float, Mapping[Hashable, float]]


@dataclass(frozen=True)
class DiscreteProbabilitySpace:
    atoms: tuple[tuple[Hashable, float], ...]

    def __post_init__(self):
        atoms = tuple((label, float(w)) for label, w in self.atoms)
        if not atoms:
            raise ModelError("probability space needs at least one atom")
        if len({label for label, _ in atoms}) != len(atoms):
            raise ModelError("atom labels must be distinct")
        if any(w < -LHV_ATOL for _, w in atoms):
            raise ModelError("atom weights must be nonnegative")
        if abs(sum(w for _, w in atoms) - 1.0) > LHV_ATOL:
            raise ModelError("atom weights must sum to 1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def uniform(cls, labels: Sequence[Hashable]) -> "DiscreteProbabilitySpace":
        return cls(tuple((label, 1.0 / len(labels)) for label in labels))

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return tuple(label for label, _ in self.atoms)

    def support(self) -> tuple[tuple[Hashable, float], ...]:
        """Atoms of positive weight."""
        return tuple((label, w) for label, w in self.atoms if w > 0.0)

    def expectation(self, f) -> float:
        """``sum w * f(label)`` over the support; ``f`` need not be defined on null atoms."""
        return float(sum(w * f(label) for label, w in self.support()))


def _lookup(table: RandomVariables, eigenvalue: float) -> Mapping[Hashable, float]:
    for key, rv in table.items():
        if abs(float(key) - eigenvalue) <= KEY_ATOL:
            return rv
    raise ModelError(f"no random variable for eigenvalue {eigenvalue:.12g}")


def _value(rv: Mapping[Hashable, float], label: Hashable) -> float:
    try:
        return float(rv[label])
    except KeyError as exc:
        raise ModelError(f"random variable undefined at atom {label!r}") from exc


def qt_expect(a, table: RandomVariables, label: Hashable, spec: Spectrum | None = None) -> float:
    """``sum_{a in spct(A)} a * X_a(label)``."""
    spec = spectrum(a) if spec is None else spec
    return float(sum(e * _value(_lookup(table, e), label) for e in spec.eigenvalues))


@dataclass(frozen=True, eq=False)
class LhvModel:
    """Hidden-variable account of the joint statistics of ``A`` and ``B`` on ``rho``."""

    space: DiscreteProbabilitySpace
    A: np.ndarray
    B: np.ndarray
    rho: DensityMatrix
    X: RandomVariables
    Y: RandomVariables

    def __post_init__(self):
        object.__setattr__(self, "A", mc.as_matrix(self.A))
        object.__setattr__(self, "B", mc.as_matrix(self.B))
        object.__setattr__(self, "rho", as_density(self.rho))


def _family_ok(space: DiscreteProbabilitySpace, spec: Spectrum, table: RandomVariables, tol: float) -> bool:
    try:
        rvs = [_lookup(table, e) for e in spec.eigenvalues]
        for label, _ in space.support():
            vals = [_value(rv, label) for rv in rvs]
            if min(vals) < -tol or abs(sum(vals) - 1.0) > tol:
                return False
    except ModelError:
        return False
    return True


def lhv_check(m: LhvModel, tol: float = LHV_ATOL) -> bool:
    """Positivity, normalization and correlation matching of an LHV model.

    Every ``X_a`` and ``Y_b`` must be nonnegative and each family must sum
    to 1 on the support of the space, and ``E[X_a Y_b]`` must equal
    ``trace(P_a Q_b rho)`` for all eigenvalues ``a`` of ``A`` and ``b`` of ``B``.
    """
    spec_a, spec_b = spectrum(m.A), spectrum(m.B)
    if not (_family_ok(m.space, spec_a, m.X, tol) and _family_ok(m.space, spec_b, m.Y, tol)):
        return False
    for ea in spec_a:
        xa = _lookup(m.X, ea.eigenvalue)
        for eb in spec_b:
            yb = _lookup(m.Y, eb.eigenvalue)
            quantum = complex(np.trace(ea.projector @ eb.projector @ m.rho.mat))
            classical = m.space.expectation(lambda w: _value(xa, w) * _value(yb, w))
            if abs(quantum.imag) > tol or abs(quantum.real - classical) > tol:
                return False
    return True


def lhv_product_expect(m: LhvModel, tol: float = LHV_ATOL) -> float:
    """``E[qt_expect(A, X) * qt_expect(B, Y)]``, checked against ``Re trace(A B rho)``."""
    if not lhv_check(m, tol):
        raise ModelError("model does not satisfy the local hidden-variable conditions")
    spec_a, spec_b = spectrum(m.A), spectrum(m.B)
    value = m.space.expectation(
        lambda w: qt_expect(m.A, m.X, w, spec_a) * qt_expect(m.B, m.Y, w, spec_b)
    )
    quantum = complex(np.trace(m.A @ m.B @ m.rho.mat)).real
    if abs(value - quantum) > tol:
        raise InternalInvariantError(
            f"LHV product expectation {value} differs from trace(A B rho) = {quantum}"
        )
    return value


@dataclass(frozen=True, eq=False)
class ChshLhvModel:
    """Four pairwise LHV models sharing one space and the families ``U0, U1, V0, V1``.

    ``U_i`` accounts for Alice's ``A_i`` and ``V_j`` for Bob's ``B_j``; the
    pair ``(A_i, B_j)`` is modelled by ``(U_i, V_j)``.
    """

    space: DiscreteProbabilitySpace
    cfg: ChshConfig
    rho: DensityMatrix
    U0: RandomVariables
    U1: RandomVariables
    V0: RandomVariables
    V1: RandomVariables

    def pair(self, i: int, j: int) -> LhvModel:
        a = (self.cfg.A0, self.cfg.A1)[i]
        b = (self.cfg.B0, self.cfg.B1)[j]
        x = (self.U0, self.U1)[i]
        y = (self.V0, self.V1)[j]
        return LhvModel(self.space, a, b, self.rho, x, y)

    def check(self, tol: float = LHV_ATOL) -> bool:
        return all(lhv_check(self.pair(i, j), tol) for i in (0, 1) for j in (0, 1))

    def correlations(self) -> dict[tuple[int, int], float]:
        return {(i, j): lhv_product_expect(self.pair(i, j)) for i in (0, 1) for j in (0, 1)}

    def chsh_value(self) -> float:
        e = self.correlations()
        return e[0, 1] - e[0, 0] + e[1, 0] + e[1, 1]

    def reproduces(self, cfg: ChshConfig, rho: DensityMatrix, tol: float = LHV_ATOL) -> bool:
        same_cfg = all(
            np.array_equal(p, q)
            for p, q in zip(
                (self.cfg.A0, self.cfg.A1, self.cfg.B0, self.cfg.B1),
                (cfg.A0, cfg.A1, cfg.B0, cfg.B1),
            )
        )
        same_rho = bool(np.max(np.abs(as_density(rho).mat - self.rho.mat)) <= tol)
        return same_cfg and same_rho and self.check(tol)


def _local_family(obs_local: np.ndarray, states: Sequence[DensityMatrix]) -> dict[float, dict[int, float]]:
    return {
        e.eigenvalue: {
            k: float(np.trace(e.projector @ st.mat).real) for k, st in enumerate(states)
        }
        for e in spectrum(obs_local)
    }


def lhv_from_separable(sep: SeparableDecomposition, cfg: ChshConfig) -> ChshLhvModel:
    """The canonical hidden-variable model of a separable state.

    One atom per term ``w_k rho_A^k (x) rho_B^k``, with
    ``U_i[a](k) = trace(P_a rho_A^k)`` and ``V_j[b](k) = trace(Q_b rho_B^k)``.
    """
    if cfg.mode != "local":
        raise ModelError("separable LHV construction needs a local-tensor configuration")
    rho = density_from_separable(sep)
    if cfg.factor_dims != rho.factors:
        raise ModelError("configuration factors do not match the state")
    space = DiscreteProbabilitySpace(tuple((k, w) for k, (w, _, _) in enumerate(sep.entries)))
    lefts = [left for _, left, _ in sep.entries]
    rights = [right for _, _, right in sep.entries]
    a0, a1, b0, b1 = cfg.local
    return ChshLhvModel(
        space,
        cfg,
        rho,
        _local_family(a0, lefts),
        _local_family(a1, lefts),
        _local_family(b0, rights),
        _local_family(b1, rights),
    )


def marginal_model(cfg: ChshConfig, rho: DensityMatrix) -> ChshLhvModel:
    """Single-atom model reproducing every marginal ``trace(P_a rho)``.

    It passes :meth:`ChshLhvModel.check` only when all four joint
    distributions factorize; for entangled states it fails.
    """
    rho = as_density(rho)
    space = DiscreteProbabilitySpace((("*", 1.0),))

    def family(obs):
        return {e.eigenvalue: {"*": float(np.trace(e.projector @ rho.mat).real)} for e in spectrum(obs)}

    return ChshLhvModel(space, cfg, rho, family(cfg.A0), family(cfg.A1), family(cfg.B0), family(cfg.B1))


# --- classical strategies --------------------------------------------------

@dataclass(frozen=True)
class DeterministicStrategy:
    """Alice answers ``a0`` or ``a1`` on input 0 or 1; Bob answers ``b0`` or ``b1``."""

    a0: int
    a1: int
    b0: int
    b1: int

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            v = getattr(self, name)
            if v not in (-1, 1):
                raise RangeError(f"{name} must be -1 or +1, got {v!r}")
            object.__setattr__(self, name, int(v))

    def alice(self, x: int) -> int:
        return (self.a0, self.a1)[x]

    def bob(self, y: int) -> int:
        return (self.b0, self.b1)[y]

    def correlation(self, x: int, y: int) -> int:
        return self.alice(x) * self.bob(y)

    def c_value(self) -> int:
        return self.a0 * self.b1 - self.a0 * self.b0 + self.a1 * self.b0 + self.a1 * self.b1


@dataclass(frozen=True)
class MixedStrategy:
    """Shared randomness over deterministic strategies: ``[(weight, strategy), ...]``."""

    entries: tuple[tuple[float, DeterministicStrategy], ...]

    def __post_init__(self):
        entries = tuple((float(w), s) for w, s in self.entries)
        if not entries:
            raise RangeError("mixed strategy needs at least one component")
        if any(w < 0 for w, _ in entries) or abs(sum(w for w, _ in entries) - 1.0) > 1e-12:
            raise RangeError("mixture weights must be nonnegative and sum to 1")
        object.__setattr__(self, "entries", entries)

    def correlation(self, x: int, y: int) -> float:
        return float(sum(w * s.correlation(x, y) for w, s in self.entries))

    def c_value(self) -> float:
        return float(sum(w * s.c_value() for w, s in self.entries))


def all_deterministic_strategies() -> list[DeterministicStrategy]:
    return [DeterministicStrategy(*v) for v in itertools.product((1, -1), repeat=4)]


def classical_strategy_table() -> list[tuple[DeterministicStrategy, int]]:
    return [(s, s.c_value()) for s in all_deterministic_strategies()]


def classical_max() -> int:
    return max(c for _, c in classical_strategy_table())


def score_from_expectations(
    e00: float, e01: float, e10: float, e11: float, tol: float = 1e-9
) -> tuple[float, float]:
    """``(C, C / 4)`` with ``C = E01 - E00 + E10 + E11``."""
    for name, e in (("E00", e00), ("E01", e01), ("E10", e10), ("E11", e11)):
        if not -1.0 - tol <= e <= 1.0 + tol:
            raise RangeError(f"{name} = {e} outside [-1, 1]")
    c = e01 - e00 + e10 + e11
    return c, c / 4.0
