"""Projective measurements: validation, construction, probabilities, collapse, sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matrix as mc
from .errors import DimensionError, PreconditionError, RangeError
from .rng import RngState
from .spectral import HERMITIAN_ATOL, is_hermitian, is_projector, real_diag_decomp, spectrum
from .states import DensityMatrix, as_density, density_from_matrix, max_mixed

MEAS_ATOL = 1e-10
ZERO_PROB_THRESHOLD = 1e-12
CLAMP_ATOL = 1e-10


@dataclass(frozen=True)
class MeasOutcome:
    value: float
    projector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "projector", mc.as_matrix(self.projector))


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Outcomes ``(value, projector)`` acting on a ``dim``-dimensional space.

    The container itself does not validate; use :func:`is_proj_measurement`.
    """

    outcomes: tuple[MeasOutcome, ...]

    def __post_init__(self):
        outs = tuple(
            o if isinstance(o, MeasOutcome) else MeasOutcome(*o) for o in self.outcomes
        )
        if not outs:
            raise DimensionError("a measurement needs at least one outcome")
        dims = {o.projector.shape for o in outs}
        if len(dims) != 1:
            raise DimensionError("projectors have different shapes")
        object.__setattr__(self, "outcomes", outs)

    @property
    def dim(self) -> int:
        return self.outcomes[0].projector.shape[0]

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(o.value for o in self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    def observable(self) -> np.ndarray:
        """``sum_i value_i * projector_i``."""
        return mc.as_matrix(sum(o.value * o.projector for o in self.outcomes))

    def lift_left(self, m: int) -> "ProjectiveMeasurement":
        """The measurement ``P_i (x) 1_m`` on the left factor of a product space."""
        eye = np.eye(m)
        return ProjectiveMeasurement(
            tuple(MeasOutcome(o.value, np.kron(o.projector, eye)) for o in self.outcomes)
        )

    def lift_right(self, n: int) -> "ProjectiveMeasurement":
        eye = np.eye(n)
        return ProjectiveMeasurement(
            tuple(MeasOutcome(o.value, np.kron(eye, o.projector)) for o in self.outcomes)
        )


@dataclass(frozen=True)
class JointOutcomeDistribution:
    """Probabilities of outcome pairs, one entry per ``(i, j)`` projector pair.

    Pairs are kept apart even when their value products coincide; see
    :meth:`merged_by_product` for the collapsed view.
    """

    entries: tuple[tuple[float, float, float], ...]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, _, p in self.entries])

    def product_expectation(self) -> float:
        return float(sum(a * b * p for a, b, p in self.entries))

    def merged_by_product(self) -> dict[float, float]:
        out: dict[float, float] = {}
        for a, b, p in self.entries:
            key = round(a * b, 12)
            out[key] = out.get(key, 0.0) + p
        return out

    def probability(self, left_value: float, right_value: float, tol: float = 1e-9) -> float:
        return float(
            sum(
                p
                for a, b, p in self.entries
                if abs(a - left_value) <= tol and abs(b - right_value) <= tol
            )
        )


def is_proj_measurement(pm: ProjectiveMeasurement, tol: float = 1e-8) -> bool:
    """Distinct values, orthogonal projectors, and projectors summing to the identity."""
    values = pm.values
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= tol:
                return False
    projs = [o.projector for o in pm.outcomes]
    if not all(is_projector(p, tol) for p in projs):
        return False
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            if np.max(np.abs(projs[i] @ projs[j])) > tol:
                return False
    return bool(np.max(np.abs(sum(projs) - np.eye(pm.dim))) <= tol)


def make_pm(a, tol: float = HERMITIAN_ATOL) -> ProjectiveMeasurement:
    """Measurement of a Hermitian observable: one outcome per distinct eigenvalue.

    Outcomes are ordered by descending eigenvalue.
    """
    a = mc.as_matrix(a)
    mc._require_square(a)
    if not is_hermitian(a, tol):
        raise PreconditionError("observable is not Hermitian")
    return ProjectiveMeasurement(
        tuple(MeasOutcome(e.eigenvalue, e.projector) for e in spectrum(a, tol=tol))
    )


def _clamp_probability(p: complex, imag_tol: float = MEAS_ATOL) -> float:
    if abs(p.imag) > imag_tol:
        raise RangeError(f"probability has imaginary part {p.imag:.3g}")
    x = p.real
    if x < -CLAMP_ATOL or x > 1.0 + CLAMP_ATOL:
        raise RangeError(f"probability {x:.12g} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def _check_dims(rho: DensityMatrix, dim: int) -> None:
    if rho.dim != dim:
        raise DimensionError(f"state dim {rho.dim} does not match measurement dim {dim}")


def outcome_prob(rho: DensityMatrix, pm: ProjectiveMeasurement, i: int) -> float:
    """``trace(rho @ P_i)``, validated real and clamped to ``[0, 1]``."""
    rho = as_density(rho)
    _check_dims(rho, pm.dim)
    if not 0 <= i < len(pm):
        raise IndexError(f"outcome index {i} out of range for {len(pm)} outcomes")
    return _clamp_probability(complex(np.trace(rho.mat @ pm.outcomes[i].projector)))


def outcome_probs(rho: DensityMatrix, pm: ProjectiveMeasurement) -> np.ndarray:
    return np.array([outcome_prob(rho, pm, i) for i in range(len(pm))])


def collapse(rho: DensityMatrix, p) -> DensityMatrix:
    """Post-measurement state ``P rho P / trace(rho P)``.

    When ``trace(rho P)`` is below ``1e-12`` the state collapses to the
    maximally mixed state of the same dimension.
    """
    rho = as_density(rho)
    p = mc.as_matrix(p)
    if p.shape != rho.mat.shape:
        raise DimensionError(f"projector shape {p.shape} does not match state dim {rho.dim}")
    if not is_projector(p, MEAS_ATOL):
        raise PreconditionError("collapse requires an orthogonal projector")
    prob = np.trace(rho.mat @ p).real
    if prob < ZERO_PROB_THRESHOLD:
        return max_mixed(rho.dim)
    out = p @ rho.mat @ p / prob
    # small probabilities amplify rounding; clip the spectrum back to a state
    dec = real_diag_decomp(0.5 * (out + out.conj().T))
    evals = np.clip(dec.eigenvalues, 0.0, None)
    return density_from_matrix((dec.U * (evals / evals.sum())) @ dec.U.conj().T)


def expect_value(rho: DensityMatrix, pm: ProjectiveMeasurement) -> float:
    """``sum_i prob_i * value_i``."""
    probs = outcome_probs(rho, pm)
    return float(np.dot(probs, pm.values))


def joint_distribution(
    rho: DensityMatrix, left: ProjectiveMeasurement, right: ProjectiveMeasurement
) -> JointOutcomeDistribution:
    """Outcome pairs of ``left (x) right`` on a bipartite state of dim ``n * m``.

    Entry order is row-major over ``(i, j)``.
    """
    rho = as_density(rho)
    _check_dims(rho, left.dim * right.dim)
    entries = []
    for mo in left.outcomes:
        for no in right.outcomes:
            p = complex(np.trace(np.kron(mo.projector, no.projector) @ rho.mat))
            entries.append((mo.value, no.value, _clamp_probability(p)))
    return JointOutcomeDistribution(tuple(entries))


def commuting_joint_distribution(
    rho: DensityMatrix, first: ProjectiveMeasurement, second: ProjectiveMeasurement
) -> JointOutcomeDistribution:
    """Joint statistics of two commuting measurements on the same space.

    Uses ``trace(P_a @ Q_b @ rho)``; for lifted local measurements this is
    the same as :func:`joint_distribution` on the factors.
    """
    rho = as_density(rho)
    _check_dims(rho, first.dim)
    _check_dims(rho, second.dim)
    entries = []
    for mo in first.outcomes:
        for no in second.outcomes:
            p = complex(np.trace(mo.projector @ no.projector @ rho.mat))
            entries.append((mo.value, no.value, _clamp_probability(p)))
    return JointOutcomeDistribution(tuple(entries))


def inverse_cdf(probabilities: Sequence[float], u) -> np.ndarray:
    """Index drawn by inverse CDF for uniform(s) ``u`` in ``[0, 1)``, stored order."""
    probs = np.asarray(probabilities, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise DimensionError("need a non-empty 1-D probability vector")
    if np.any(probs < -CLAMP_ATOL) or abs(probs.sum() - 1.0) > 1e-9:
        raise RangeError("probabilities must be nonnegative and sum to 1")
    cdf = np.cumsum(np.clip(probs, 0.0, None))
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, np.asarray(u, dtype=float), side="right")
    # zero-probability tail entries are never selected
    last = int(np.flatnonzero(probs > 0)[-1])
    return np.minimum(idx, last)


def sample_outcome(dist, state: RngState, rho: DensityMatrix | None = None):
    """Draw one outcome and return ``(outcome, next_state)``.

    ``dist`` is either a :class:`JointOutcomeDistribution`, giving a value
    pair, or a :class:`ProjectiveMeasurement` together with ``rho``, giving
    a single value.
    """
    u, nxt = state.next_uniform()
    if isinstance(dist, JointOutcomeDistribution):
        a, b, _ = dist.entries[int(inverse_cdf(dist.probabilities, u))]
        return (a, b), nxt
    if isinstance(dist, ProjectiveMeasurement):
        if rho is None:
            raise PreconditionError("sampling a measurement requires a state")
        k = int(inverse_cdf(outcome_probs(rho, dist), u))
        return dist.outcomes[k].value, nxt
    raise TypeError(f"cannot sample from {type(dist).__name__}")
