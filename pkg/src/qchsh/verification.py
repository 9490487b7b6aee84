"""Randomized property suites backing ``qchsh verify``.

Each suite draws ``cases`` random instances and counts the ones violating
any checked property. An exception raised while checking a case counts as
a failure of that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import matrix as mc
from . import random_instances as ri
from .chsh import (
    TSIRELSON,
    canonical_config,
    check_bound,
    chsh_expect,
    chsh_op,
    chsh_square,
    commutator,
)
from .game import QuantumStrategy, exact_expectations, play_game
from .lhv import classical_strategy_table, lhv_from_separable
from .measurement import (
    collapse,
    expect_value,
    is_proj_measurement,
    joint_distribution,
    make_pm,
    outcome_probs,
)
from .spectral import is_hermitian, l2_op_norm, real_diag_decomp, singular_values, spectrum
from .states import (
    Ensemble,
    density_from_ensemble,
    density_from_matrix,
    ensemble_from_density,
    evolve,
    is_pure,
)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed,
            "messages": self.messages[:5],
        }


def _run(name: str, cases: int, check: Callable[[int], None]) -> SuiteResult:
    res = SuiteResult(name)
    for k in range(cases):
        res.cases += 1
        try:
            check(k)
        except Exception as exc:  # noqa: BLE001 - every failure mode is a case failure
            res.failures += 1
            res.messages.append(f"case {k}: {type(exc).__name__}: {exc}")
    return res


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise AssertionError(what)


def suite_mat_core(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    def check(_):
        n = int(rng.integers(1, 5))
        a, b = ri.ginibre(rng, n), ri.ginibre(rng, n)
        c, d = ri.ginibre(rng, n), ri.ginibre(rng, n)
        _require(mc.allclose(mc.adjoint(a @ b), mc.adjoint(b) @ mc.adjoint(a), 1e-12), "(AB)^+ = B^+ A^+")
        _require(abs(mc.trace(a @ b) - mc.trace(b @ a)) <= 1e-10, "trace cyclic")
        _require(mc.allclose(np.kron(a, b) @ np.kron(c, d), np.kron(a @ c, b @ d), 1e-10), "mixed product")
        _require(abs(mc.trace(mc.tensor(a, c)) - mc.trace(a) * mc.trace(c)) <= 1e-10, "trace of tensor")
        u, v, w, x = (ri.ginibre(rng, n, 1) for _ in range(4))
        lhs = mc.outer(u, v) @ mc.outer(w, x)
        _require(mc.allclose(lhs, mc.inner(v, w) * mc.outer(u, x), 1e-10), "outer product rule")
        _require(abs(mc.inner(u, v) - mc.inner(v, u).conjugate()) <= 1e-12, "conjugate symmetry")
        _require(mc.inner(u, u).real >= 0, "inner positivity")

    return _run("mat-core", cases, check)


def suite_spectral(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    def check(k):
        n = int(rng.integers(1, 9))
        a = ri.random_degenerate_hermitian(rng, n) if k % 3 == 0 else ri.random_hermitian(rng, n)
        sp = spectrum(a)
        projs = sp.projectors
        eye = np.eye(n)
        _require(mc.allclose(sum(projs), eye, 1e-8), "projectors complete")
        _require(sum(e.multiplicity for e in sp) == n, "multiplicities sum to n")
        for i, p in enumerate(projs):
            _require(mc.allclose(p @ p, p, 1e-8) and is_hermitian(p, 1e-8), "projector")
            for q in projs[i + 1:]:
                _require(mc.max_abs(p @ q) <= 1e-8, "orthogonality")
        _require(mc.allclose(sum(e.eigenvalue * e.projector for e in sp), a, 1e-8), "A = sum a P_a")
        b = ri.ginibre(rng, n)
        c = ri.ginibre(rng, n)
        nb, nc = l2_op_norm(b), l2_op_norm(c)
        _require(l2_op_norm(b + c) <= nb + nc + 1e-10, "triangle")
        _require(l2_op_norm(b @ c) <= nb * nc + 1e-10, "submultiplicative")
        _require(l2_op_norm(b @ c - c @ b) <= 2 * nb * nc + 1e-10, "commutator bound")
        _require(abs(l2_op_norm(a) - math.sqrt(l2_op_norm(a @ a))) <= 1e-8, "||S|| = sqrt ||S^2||")
        _require(abs(l2_op_norm(b) - singular_values(b)[0]) <= 1e-12, "norm = max singular value")
        vs = ri.ginibre(rng, n, 64)
        vs /= np.linalg.norm(vs, axis=0)
        _require(np.max(np.linalg.norm(b @ vs, axis=0)) <= nb + 1e-8, "sup over unit vectors")

    return _run("spectral", cases, check)


def suite_states(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    def check(_):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(k))
        ens = Ensemble(tuple((float(w[i]), ri.random_ket(rng, n)) for i in range(k)))
        rho = density_from_ensemble(ens)
        density_from_matrix(rho.mat)
        back = density_from_ensemble(ensemble_from_density(rho))
        _require(mc.allclose(back.mat, rho.mat, 1e-8), "ensemble round trip")
        pure = is_pure(rho)
        _require(pure == (abs(np.trace(rho.mat @ rho.mat).real - 1) <= 1e-10), "purity criteria")
        u = ri.random_unitary(rng, n)
        out = evolve(u, rho)
        _require(abs(np.trace(out.mat) - 1) <= 1e-10, "trace preserved")
        ev_in = real_diag_decomp(rho.mat).eigenvalues
        ev_out = real_diag_decomp(out.mat).eigenvalues
        _require(np.max(np.abs(ev_in - ev_out)) <= 1e-8, "spectrum preserved")
        sep = ri.random_separable_density(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        density_from_matrix(sep.mat)

    return _run("quantum-state", cases, check)


def suite_measurement(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    def check(k):
        n = int(rng.integers(1, 9))
        a = ri.random_degenerate_hermitian(rng, n) if k % 2 else ri.random_hermitian(rng, n)
        pm = make_pm(a)
        _require(is_proj_measurement(pm), "make_pm is a projective measurement")
        _require(mc.allclose(pm.observable(), a, 1e-8), "sum value * projector = A")
        rho = ri.random_density(rng, n, rank=int(rng.integers(1, n + 1)))
        probs = outcome_probs(rho, pm)
        _require(bool(np.all(probs >= 0)) and abs(probs.sum() - 1) <= 1e-9, "probabilities")
        _require(abs(expect_value(rho, pm) - np.trace(a @ rho.mat).real) <= 1e-8, "expectation identity")
        for o in pm.outcomes:
            density_from_matrix(collapse(rho, o.projector).mat)
        nl, nr = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        al, br = ri.random_hermitian(rng, nl), ri.random_hermitian(rng, nr)
        rho2 = ri.random_density(rng, nl * nr)
        jd = joint_distribution(rho2, make_pm(al), make_pm(br))
        _require(abs(jd.probabilities.sum() - 1) <= 1e-9, "joint probabilities sum to 1")
        _require(
            abs(jd.product_expectation() - np.trace(np.kron(al, br) @ rho2.mat).real) <= 1e-8,
            "joint product expectation = trace((A x B) rho)",
        )

    return _run("measurement", cases, check)


def suite_chsh(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    cfg0, rho0 = canonical_config()

    def check(k):
        n, m = ri.random_factor_dims(rng, 16)
        cfg = ri.random_commuting_config(rng, n, m)
        s = chsh_op(cfg)
        _require(is_hermitian(s, 1e-8), "CHSH operator Hermitian")
        chsh_square(cfg)
        ns = l2_op_norm(s)
        na, nb = l2_op_norm(commutator(cfg.A0, cfg.A1)), l2_op_norm(commutator(cfg.B0, cfg.B1))
        _require(ns * ns <= 4 + na * nb + 1e-8 and 4 + na * nb <= 8 + 1e-8, "norm chain")
        _require(ns <= TSIRELSON + 1e-8, "Tsirelson norm")
        rho = ri.random_density(rng, n * m)
        e = chsh_expect(cfg, rho)
        _require(abs(e) <= ns + 1e-8, "|<S>| <= ||S||")
        _require(check_bound(cfg, rho, "general", tol=tol).bound_satisfied, "general bound")
        lcfg = ri.random_local_config(rng, n, m)
        sep = ri.random_separable_density(rng, n, m)
        _require(check_bound(lcfg, sep, "separable", tol=tol).bound_satisfied, "separable bound")
        ccfg = ri.random_one_commuting_config(rng, n, m)
        _require(check_bound(ccfg, ri.random_density(rng, n * m), "commuting", tol=tol).bound_satisfied, "commuting bound")
        _require(abs(abs(chsh_expect(cfg0, rho0)) - TSIRELSON) <= 1e-9, "tightness")

    return _run("chsh", cases, check)


def suite_lhv(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    table = classical_strategy_table()

    def check(_):
        _require(len(table) == 16 and max(c for _, c in table) == 2, "classical table")
        _require(all(abs(c) <= 2 for _, c in table), "classical |C| <= 2")
        mixed = ri.random_mixed_strategy(rng)
        _require(abs(mixed.c_value()) <= 2 + 1e-12, "mixed |C| <= 2")
        n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        cfg = ri.random_local_config(rng, n, m)
        model = lhv_from_separable(ri.random_separable_decomposition(rng, n, m), cfg)
        _require(model.check(), "separable LHV model passes the check")
        _require(abs(model.chsh_value()) <= 2 + 1e-6, "LHV |C| <= 2")
        _require(abs(model.chsh_value() - chsh_expect(cfg, model.rho)) <= 1e-8, "LHV C = CHSH expectation")

    return _run("lhv-game", cases, check)


def suite_game(rng: np.random.Generator, cases: int, tol: float) -> SuiteResult:
    cfg, rho = canonical_config()
    quantum = QuantumStrategy(cfg, rho)
    exact_q = exact_expectations(quantum)
    cq = exact_q[0, 1] - exact_q[0, 0] + exact_q[1, 0] + exact_q[1, 1]
    runs = max(1, cases // 10)

    def check(k):
        seed = int(rng.integers(0, 2**63))
        res = play_game(quantum, 10_000, seed)
        _require(abs(res.c_estimate - cq) <= 5 * res.std_error, "Monte Carlo within 5 SE")
        _require(res == play_game(quantum, 10_000, seed, workers=3), "partition-independent")

    return _run("game", runs, check)


SUITES = {
    "mat-core": suite_mat_core,
    "spectral": suite_spectral,
    "quantum-state": suite_states,
    "measurement": suite_measurement,
    "chsh": suite_chsh,
    "lhv-game": suite_lhv,
    "game": suite_game,
}


def run_all(seed: int = 0, cases: int = 100, tol: float = 1e-9) -> list[SuiteResult]:
    results = []
    for i, (name, suite) in enumerate(SUITES.items()):
        rng = np.random.default_rng([seed, i])
        results.append(suite(rng, cases, tol))
    return results
