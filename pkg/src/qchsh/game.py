"""Monte Carlo CHSH game with classical and quantum strategies.

Each round ``r`` draws three uniforms from :mod:`qchsh.rng`: stream 0 picks
Alice's input ``x``, stream 1 Bob's input ``y`` and stream 2 the answers
(the measurement outcome pair, or the component of a mixed classical
strategy). Answers are resolved by inverse CDF over a per-input table of
``(a, b)`` pairs, and only integer counts are accumulated, so results are
bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .chsh import ChshConfig, chsh_expect
from .errors import ConfigError, RangeError
from .lhv import DeterministicStrategy, MixedStrategy, score_from_expectations
from .measurement import commuting_joint_distribution, inverse_cdf, joint_distribution, make_pm
from .rng import uniforms
from .states import DensityMatrix, as_density

INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """Alice measures ``A_x`` and Bob ``B_y`` on their parts of ``rho``."""

    cfg: ChshConfig
    rho: DensityMatrix
    name: str = "quantum"

    def __post_init__(self):
        rho = as_density(self.rho)
        if rho.dim != self.cfg.dim:
            raise ConfigError(f"state dim {rho.dim} does not match observables dim {self.cfg.dim}")
        object.__setattr__(self, "rho", rho)


Strategy = Union[DeterministicStrategy, MixedStrategy, QuantumStrategy]


@dataclass(frozen=True)
class GameResult:
    rounds: int
    seed: int
    strategy: str
    counts: dict[tuple[int, int], int]
    per_input_expectations: dict[tuple[int, int], float]
    c_estimate: float
    std_error: float
    score_estimate: float
    score_std_error: float
    mean_round_score: float
    outcome_counts: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        key = lambda xy: f"{xy[0]},{xy[1]}"  # noqa: E731
        return {
            "rounds": self.rounds,
            "seed": self.seed,
            "strategy": self.strategy,
            "counts": {key(k): v for k, v in self.counts.items()},
            "expectations": {key(k): v for k, v in self.per_input_expectations.items()},
            "outcome_counts": {key(k): v for k, v in self.outcome_counts.items()},
            "c_estimate": self.c_estimate,
            "std_error": self.std_error,
            "score_estimate": self.score_estimate,
            "score_std_error": self.score_std_error,
            "mean_round_score": self.mean_round_score,
        }


def describe(strategy: Strategy) -> str:
    if isinstance(strategy, DeterministicStrategy):
        return "classical:{},{},{},{}".format(strategy.a0, strategy.a1, strategy.b0, strategy.b1)
    if isinstance(strategy, MixedStrategy):
        return "classical-mixed:" + ";".join(
            f"{w!r}@{describe(s).split(':', 1)[1]}" for w, s in strategy.entries
        )
    if isinstance(strategy, QuantumStrategy):
        return strategy.name
    raise TypeError(f"unknown strategy type {type(strategy).__name__}")


def _sign(v: float) -> int:
    return 1 if v > 0 else -1


def answer_tables(strategy: Strategy) -> dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]:
    """For each input pair, the answer products ``a * b`` and their probabilities."""
    tables = {}
    if isinstance(strategy, DeterministicStrategy):
        strategy = MixedStrategy(((1.0, strategy),))
    if isinstance(strategy, MixedStrategy):
        weights = np.array([w for w, _ in strategy.entries])
        for x, y in INPUTS:
            prods = np.array([s.correlation(x, y) for _, s in strategy.entries], dtype=float)
            tables[x, y] = (prods, weights)
        return tables
    if isinstance(strategy, QuantumStrategy):
        cfg, rho = strategy.cfg, strategy.rho
        if cfg.local is not None:
            a_pms = [make_pm(a) for a in cfg.local[:2]]
            b_pms = [make_pm(b) for b in cfg.local[2:]]
            dist = joint_distribution
        else:
            a_pms = [make_pm(a) for a in cfg.alice]
            b_pms = [make_pm(b) for b in cfg.bob]
            dist = commuting_joint_distribution
        for x, y in INPUTS:
            d = dist(rho, a_pms[x], b_pms[y])
            # observables square to 1, so outcome values are +-1 up to rounding
            prods = np.array([_sign(a) * _sign(b) for a, b, _ in d.entries], dtype=float)
            tables[x, y] = (prods, d.probabilities)
        return tables
    raise TypeError(f"unknown strategy type {type(strategy).__name__}")


def exact_expectations(strategy: Strategy) -> dict[tuple[int, int], float]:
    """Analytic ``E_{x,y}[a_x b_y]``: strategy products, or ``trace(A_x B_y rho)``."""
    if isinstance(strategy, QuantumStrategy):
        cfg, rho = strategy.cfg, strategy.rho
        return {
            (x, y): float(np.trace(cfg.alice[x] @ cfg.bob[y] @ rho.mat).real)
            for x, y in INPUTS
        }
    if isinstance(strategy, (DeterministicStrategy, MixedStrategy)):
        return {(x, y): float(strategy.correlation(x, y)) for x, y in INPUTS}
    raise TypeError(f"unknown strategy type {type(strategy).__name__}")


def exact_c(strategy: Strategy) -> float:
    e = exact_expectations(strategy)
    return score_from_expectations(e[0, 0], e[0, 1], e[1, 0], e[1, 1])[0]


def _count_chunk(tables, seed: int, start: int, stop: int) -> np.ndarray:
    rounds = np.arange(start, stop, dtype=np.uint64)
    x = (uniforms(seed, 0, rounds) >= 0.5).astype(np.int64)
    y = (uniforms(seed, 1, rounds) >= 0.5).astype(np.int64)
    u = uniforms(seed, 2, rounds)
    width = max(len(t[0]) for t in tables.values())
    counts = np.zeros((2, 2, width), dtype=np.int64)
    for xi, yi in INPUTS:
        mask = (x == xi) & (y == yi)
        if not mask.any():
            continue
        k = inverse_cdf(tables[xi, yi][1], u[mask])
        counts[xi, yi, : len(tables[xi, yi][0])] += np.bincount(k, minlength=len(tables[xi, yi][0]))
    return counts


def play_game(strategy: Strategy, rounds: int, seed: int, workers: int = 1) -> GameResult:
    """Simulate ``rounds`` rounds of the CHSH game.

    The referee draws ``(x, y)`` uniformly. A round scores +1 when
    ``x = y = 0`` and the answers differ, or when ``(x, y) != (0, 0)`` and the
    answers agree; otherwise it scores -1.

    ``std_error`` is the standard error of ``c_estimate``, combining the
    per-input sample variances; ``score_estimate`` is ``c_estimate / 4``.
    """
    if rounds < 1:
        raise RangeError("rounds must be >= 1")
    if workers < 1:
        raise RangeError("workers must be >= 1")
    tables = answer_tables(strategy)
    bounds = np.linspace(0, rounds, min(workers, rounds) + 1).astype(int)
    spans = list(zip(bounds[:-1], bounds[1:]))
    if len(spans) == 1:
        parts = [_count_chunk(tables, seed, 0, rounds)]
    else:
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            parts = list(pool.map(lambda s: _count_chunk(tables, seed, int(s[0]), int(s[1])), spans))
    counts = sum(parts[1:], parts[0])

    n_xy, e_xy, outcome_counts = {}, {}, {}
    var_sum = 0.0
    points = 0.0
    for x, y in INPUTS:
        prods = tables[x, y][0]
        c = counts[x, y, : len(prods)]
        n = int(c.sum())
        n_xy[x, y] = n
        outcome_counts[x, y] = [int(v) for v in c]
        if n == 0:
            # empty cell: no estimate, charge the maximal variance of a +-1 variable
            e_xy[x, y] = 0.0
            var_sum += 1.0
            continue
        mean = float(np.dot(c, prods)) / n
        mean_sq = float(np.dot(c, prods * prods)) / n
        e_xy[x, y] = mean
        var = (mean_sq - mean * mean) * n / (n - 1) if n > 1 else mean_sq
        var_sum += max(var, 0.0) / n
        points += (-1.0 if (x, y) == (0, 0) else 1.0) * float(np.dot(c, prods))
    c_est, score = score_from_expectations(e_xy[0, 0], e_xy[0, 1], e_xy[1, 0], e_xy[1, 1])
    se = math.sqrt(var_sum)
    return GameResult(
        rounds=rounds,
        seed=seed,
        strategy=describe(strategy),
        counts=n_xy,
        per_input_expectations=e_xy,
        c_estimate=c_est,
        std_error=se,
        score_estimate=score,
        score_std_error=se / 4.0,
        mean_round_score=points / rounds,
        outcome_counts=outcome_counts,
    )


def analytic_result(strategy: Strategy) -> dict:
    """Exact per-input expectations, ``C`` and average score."""
    e = exact_expectations(strategy)
    c, score = score_from_expectations(e[0, 0], e[0, 1], e[1, 0], e[1, 1])
    out = {"expectations": e, "c": c, "score": score}
    if isinstance(strategy, QuantumStrategy):
        out["chsh_expect"] = chsh_expect(strategy.cfg, strategy.rho)
    return out
