"""The CHSH operator, its algebra, and the classical, separable, commuting and Tsirelson bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import matrix as mc
from .errors import ConfigError, ContextError, DimensionError, InternalInvariantError
from .spectral import is_hermitian, l2_op_norm
from .states import DensityMatrix, SeparableDecomposition, as_density, density_from_separable, pure_density
from .states import PAULI_X, PAULI_Z, PLUS, PSI_MINUS

CONFIG_ATOL = 1e-9
COMMUTE_ATOL = 1e-10
BOUND_ATOL = 1e-9
SQUARE_ATOL = 1e-8
TSIRELSON = 2.0 * math.sqrt(2.0)

Mode = Literal["commuting", "local"]
Context = Literal["lhv", "separable", "commuting", "general"]


def commutator(a, b) -> np.ndarray:
    a, b = mc.as_matrix(a), mc.as_matrix(b)
    mc._require_square(a)
    if a.shape != b.shape:
        raise DimensionError(f"commutator needs equal shapes, got {a.shape} and {b.shape}")
    return mc.as_matrix(a @ b - b @ a)


def _lift(a0, a1, b0, b1) -> tuple[np.ndarray, ...]:
    n, m = a0.shape[0], b0.shape[0]
    en, em = np.eye(n), np.eye(m)
    return tuple(mc.as_matrix(np.kron(a, em)) for a in (a0, a1)) + tuple(
        mc.as_matrix(np.kron(en, b)) for b in (b0, b1)
    )


def _check_involution(name: str, a: np.ndarray, tol: float) -> None:
    mc._require_square(a)
    if not is_hermitian(a, tol):
        raise ConfigError(f"{name} is not Hermitian")
    if np.max(np.abs(a @ a - np.eye(a.shape[0]))) > tol:
        raise ConfigError(f"{name} does not square to the identity")


@dataclass(frozen=True, eq=False)
class ChshConfig:
    """Four ``+-1``-valued observables on a common space.

    In ``"commuting"`` mode the matrices are given on the full space and
    every ``A_i`` must commute with every ``B_j``. In ``"local"`` mode use
    :meth:`local_tensor`: the factors are kept in ``local`` and the full-space
    observables are their lifts ``A_i (x) 1`` and ``1 (x) B_j``.
    """

    A0: np.ndarray
    A1: np.ndarray
    B0: np.ndarray
    B1: np.ndarray
    mode: Mode = "commuting"
    local: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None
    tol: float = CONFIG_ATOL

    def __post_init__(self):
        mats = tuple(mc.as_matrix(x) for x in (self.A0, self.A1, self.B0, self.B1))
        for name, mat in zip(("A0", "A1", "B0", "B1"), mats):
            object.__setattr__(self, name, mat)
        if self.mode not in ("commuting", "local"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if len({m.shape for m in mats}) != 1:
            raise ConfigError("observables must share one shape")
        for name, mat in zip(("A0", "A1", "B0", "B1"), mats):
            _check_involution(name, mat, self.tol)
        if self.mode == "local":
            if self.local is None:
                raise ConfigError("local mode requires the local factors")
            object.__setattr__(self, "local", tuple(mc.as_matrix(x) for x in self.local))
        for i, a in enumerate((self.A0, self.A1)):
            for j, b in enumerate((self.B0, self.B1)):
                if np.max(np.abs(a @ b - b @ a)) > self.tol:
                    raise ConfigError(f"A{i} and B{j} do not commute")

    @classmethod
    def local_tensor(cls, a0, a1, b0, b1, tol: float = CONFIG_ATOL) -> "ChshConfig":
        """Alice's ``a0, a1`` act on the left ``n``-dim factor, Bob's on the right."""
        a0, a1, b0, b1 = (mc.as_matrix(x) for x in (a0, a1, b0, b1))
        if a0.shape != a1.shape or b0.shape != b1.shape:
            raise ConfigError("each party's observables must share one shape")
        for name, mat in zip(("a0", "a1", "b0", "b1"), (a0, a1, b0, b1)):
            _check_involution(name, mat, tol)
        return cls(*_lift(a0, a1, b0, b1), mode="local", local=(a0, a1, b0, b1), tol=tol)

    @property
    def dim(self) -> int:
        return self.A0.shape[0]

    @property
    def factor_dims(self) -> tuple[int, int] | None:
        if self.local is None:
            return None
        return self.local[0].shape[0], self.local[2].shape[0]

    @property
    def alice(self) -> tuple[np.ndarray, np.ndarray]:
        return self.A0, self.A1

    @property
    def bob(self) -> tuple[np.ndarray, np.ndarray]:
        return self.B0, self.B1


@dataclass(frozen=True)
class ChshReport:
    expectation: float
    abs_expectation: float
    applicable_bound: float
    bound_satisfied: bool
    margin: float
    context: str = "general"

    def to_json(self) -> dict:
        return {
            "context": self.context,
            "expectation": self.expectation,
            "abs_expectation": self.abs_expectation,
            "applicable_bound": self.applicable_bound,
            "bound_satisfied": self.bound_satisfied,
            "margin": self.margin,
        }


def chsh_op(cfg: ChshConfig) -> np.ndarray:
    """``A0 B1 - A0 B0 + A1 B0 + A1 B1``."""
    a0, a1, b0, b1 = cfg.A0, cfg.A1, cfg.B0, cfg.B1
    return mc.as_matrix(a0 @ b1 - a0 @ b0 + a1 @ b0 + a1 @ b1)


def chsh_expect(cfg: ChshConfig, rho: DensityMatrix, imag_tol: float = 1e-9) -> float:
    rho = as_density(rho)
    if rho.dim != cfg.dim:
        raise DimensionError(f"state dim {rho.dim} does not match observables dim {cfg.dim}")
    val = complex(np.trace(chsh_op(cfg) @ rho.mat))
    if abs(val.imag) > imag_tol:
        raise InternalInvariantError(f"CHSH expectation has imaginary part {val.imag:.3g}")
    return val.real


def chsh_square(cfg: ChshConfig, tol: float = SQUARE_ATOL) -> np.ndarray:
    """``S @ S``, checked against ``4 * 1 - [A0, A1] @ [B0, B1]``."""
    s = chsh_op(cfg)
    sq = s @ s
    rhs = 4.0 * np.eye(cfg.dim) - commutator(cfg.A0, cfg.A1) @ commutator(cfg.B0, cfg.B1)
    err = float(np.max(np.abs(sq - rhs)))
    if err >= tol:
        raise InternalInvariantError(f"square identity violated by {err:.3g}")
    return mc.as_matrix(sq)


def norm_chain(cfg: ChshConfig) -> dict[str, float]:
    """Quantities of the Tsirelson norm argument for ``cfg``.

    ``norm_S_squared <= 4 + norm_comm_A * norm_comm_B <= 8``.
    """
    s = chsh_op(cfg)
    comm_a = commutator(cfg.A0, cfg.A1)
    comm_b = commutator(cfg.B0, cfg.B1)
    return {
        "norm_S": l2_op_norm(s),
        "norm_S_squared": l2_op_norm(s @ s),
        "norm_comm_A": l2_op_norm(comm_a),
        "norm_comm_B": l2_op_norm(comm_b),
        "norm_observables": [l2_op_norm(x) for x in (cfg.A0, cfg.A1, cfg.B0, cfg.B1)],
    }


def expect_abs_bound(a, rho: DensityMatrix, tol: float = BOUND_ATOL) -> tuple[float, float]:
    """``(|trace(A rho)|, ||A||)``, asserting the first does not exceed the second."""
    a = mc.as_matrix(a)
    rho = as_density(rho)
    if a.shape != rho.mat.shape:
        raise DimensionError("observable and state dimensions differ")
    if not is_hermitian(a):
        raise ConfigError("observable is not Hermitian")
    value = abs(complex(np.trace(a @ rho.mat)))
    bound = l2_op_norm(a)
    if value > bound + tol:
        raise InternalInvariantError(f"|<A>| = {value} exceeds ||A|| = {bound}")
    return value, bound


def canonical_config() -> tuple[ChshConfig, DensityMatrix]:
    """Observables and singlet state attaining ``|CHSH| = 2 sqrt 2``.

    Alice measures ``Z`` and ``X``; Bob measures ``(Z - X)/sqrt 2`` and
    ``-(X + Z)/sqrt 2``.
    """
    s = 1.0 / math.sqrt(2.0)
    zmx = s * (PAULI_Z - PAULI_X)
    xpz = -s * (PAULI_X + PAULI_Z)
    cfg = ChshConfig.local_tensor(PAULI_Z, PAULI_X, zmx, xpz)
    return cfg, pure_density(PSI_MINUS)


def separable_example() -> DensityMatrix:
    """``|+><+| (x) |+><+|``."""
    plus = pure_density(PLUS)
    return density_from_separable(SeparableDecomposition(((1.0, plus, plus),)))


def _commuting_pair(cfg: ChshConfig, tol: float) -> bool:
    return (
        float(np.max(np.abs(commutator(cfg.A0, cfg.A1)))) < tol
        or float(np.max(np.abs(commutator(cfg.B0, cfg.B1)))) < tol
    )


def check_bound(
    cfg: ChshConfig,
    rho: DensityMatrix,
    context: Context = "general",
    *,
    witness=None,
    tol: float = BOUND_ATOL,
    commute_tol: float = COMMUTE_ATOL,
) -> ChshReport:
    """Evaluate the CHSH expectation against the bound its context guarantees.

    Contexts and their hypotheses:

    ``"general"``
        none; bound ``2 sqrt 2``.
    ``"commuting"``
        ``[A0, A1]`` or ``[B0, B1]`` vanishes (max-norm below ``commute_tol``); bound 2.
    ``"separable"``
        ``rho`` was built separable and ``cfg`` is in local mode with matching
        factor dimensions; bound 2.
    ``"lhv"``
        ``witness`` is a hidden-variable model (see
        :class:`qchsh.lhv.ChshLhvModel`) reproducing the four joint
        statistics of ``(cfg, rho)``; bound 2.

    Raises
    ------
    ContextError
        If the hypotheses of ``context`` do not hold.
    """
    rho = as_density(rho)
    if context == "general":
        bound = TSIRELSON
    elif context == "commuting":
        if not _commuting_pair(cfg, commute_tol):
            raise ContextError("neither [A0, A1] nor [B0, B1] vanishes")
        bound = 2.0
    elif context == "separable":
        if not rho.separable:
            raise ContextError("state is not separable by construction")
        if cfg.mode != "local" or cfg.factor_dims != rho.factors:
            raise ContextError("separable context needs local observables matching the state factors")
        bound = 2.0
    elif context == "lhv":
        if witness is None or not witness.reproduces(cfg, rho):
            raise ContextError("no valid local hidden-variable witness for this configuration")
        bound = 2.0
    else:
        raise ContextError(f"unknown context {context!r}")
    e = chsh_expect(cfg, rho)
    return ChshReport(
        expectation=e,
        abs_expectation=abs(e),
        applicable_bound=bound,
        bound_satisfied=abs(e) <= bound + tol,
        margin=bound - abs(e),
        context=context,
    )
