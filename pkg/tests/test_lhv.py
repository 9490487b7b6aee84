import math

import numpy as np
import pytest

from qchsh import random_instances as ri
from qchsh.chsh import ChshConfig, canonical_config, chsh_expect
from qchsh.errors import InternalInvariantError, ModelError, RangeError
from qchsh.lhv import (
    ChshLhvModel,
    DeterministicStrategy,
    DiscreteProbabilitySpace,
    LhvModel,
    MixedStrategy,
    all_deterministic_strategies,
    classical_max,
    classical_strategy_table,
    lhv_check,
    lhv_from_separable,
    lhv_product_expect,
    marginal_model,
    qt_expect,
    score_from_expectations,
)
from qchsh.states import KET0, PAULI_Z, PLUS, SeparableDecomposition, density_from_separable, pure_density

S = 1 / math.sqrt(2)
Z4A = np.kron(PAULI_Z, np.eye(2))
Z4B = np.kron(np.eye(2), PAULI_Z)


def two_atom_model():
    """Classical mixture diag(p, 0, 0, 1 - p) read through Z on both sides."""
    p = 0.3
    zero, one = pure_density(KET0), pure_density([[0], [1]])
    rho = density_from_separable(SeparableDecomposition(((p, zero, zero), (1 - p, one, one))))
    space = DiscreteProbabilitySpace((("w0", p), ("w1", 1 - p)))
    x = {1.0: {"w0": 1.0, "w1": 0.0}, -1.0: {"w0": 0.0, "w1": 1.0}}
    return LhvModel(space, Z4A, Z4B, rho, x, dict(x)), p


class TestSpace:
    def test_uniform(self):
        sp = DiscreteProbabilitySpace.uniform(["a", "b", "c", "d"])
        assert sp.expectation(lambda w: 1.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("atoms", [(), (("a", 0.5),), (("a", 1.5), ("b", -0.5)), (("a", 0.5), ("a", 0.5))])
    def test_invalid(self, atoms):
        with pytest.raises(ModelError):
            DiscreteProbabilitySpace(atoms)

    def test_support(self):
        sp = DiscreteProbabilitySpace((("a", 1.0), ("b", 0.0)))
        assert sp.support() == (("a", 1.0),)


class TestQtExpect:
    def test_identity(self):
        assert qt_expect(np.eye(2), {1.0: {"w": 1.0}}, "w") == 1.0

    def test_deterministic_atom(self):
        assert qt_expect(PAULI_Z, {1.0: {"w": 1.0}, -1.0: {"w": 0.0}}, "w") == 1.0

    def test_balanced_atom(self):
        assert qt_expect(PAULI_Z, {1.0: {"w": 0.5}, -1.0: {"w": 0.5}}, "w") == 0.0

    def test_missing_key(self):
        with pytest.raises(ModelError):
            qt_expect(PAULI_Z, {1.0: {"w": 1.0}}, "w")

    def test_missing_atom(self):
        with pytest.raises(ModelError):
            qt_expect(PAULI_Z, {1.0: {}, -1.0: {}}, "w")


class TestCheck:
    def test_factorizing_two_atom(self):
        m, p = two_atom_model()
        assert lhv_check(m)
        # trace oracle: E[Z x Z] on diag(p, 0, 0, 1 - p) is 1
        assert lhv_product_expect(m) == pytest.approx(np.trace(m.A @ m.B @ m.rho.mat).real, abs=1e-12)
        assert lhv_product_expect(m) == pytest.approx(1.0)

    def test_normalization_violated(self):
        m, _ = two_atom_model()
        bad = dict(m.X)
        bad[1.0] = {"w0": 0.9, "w1": 0.0}
        assert not lhv_check(LhvModel(m.space, m.A, m.B, m.rho, bad, m.Y))

    def test_negative_value(self):
        m, _ = two_atom_model()
        bad = {1.0: {"w0": 1.5, "w1": 0.0}, -1.0: {"w0": -0.5, "w1": 1.0}}
        assert not lhv_check(LhvModel(m.space, m.A, m.B, m.rho, bad, m.Y))

    def test_zero_weight_atom_is_ignored(self):
        m, _ = two_atom_model()
        space = DiscreteProbabilitySpace((("w0", 0.3), ("w1", 0.7), ("ghost", 0.0)))
        x = {k: {**v, "ghost": 5.0} for k, v in m.X.items()}
        assert lhv_check(LhvModel(space, m.A, m.B, m.rho, x, m.Y))

    def test_single_atom_product_state(self, rng):
        ra, rb = ri.random_density(rng, 2), ri.random_density(rng, 2)
        rho = density_from_separable(SeparableDecomposition(((1.0, ra, rb),)))
        a, b = ri.random_hermitian(rng, 2), ri.random_hermitian(rng, 2)
        la, lb = np.kron(a, np.eye(2)), np.kron(np.eye(2), b)
        from qchsh.spectral import spectrum

        x = {e.eigenvalue: {"*": float(np.trace(e.projector @ ra.mat).real)} for e in spectrum(a)}
        y = {e.eigenvalue: {"*": float(np.trace(e.projector @ rb.mat).real)} for e in spectrum(b)}
        m = LhvModel(DiscreteProbabilitySpace((("*", 1.0),)), la, lb, rho, x, y)
        assert lhv_check(m)
        assert lhv_product_expect(m) == pytest.approx(np.trace(la @ lb @ rho.mat).real, abs=1e-8)

    def test_single_atom_fails_on_entangled(self):
        cfg, rho = canonical_config()
        model = marginal_model(cfg, rho)
        assert not model.check()
        with pytest.raises(ModelError):
            lhv_product_expect(model.pair(0, 0))

    def test_identity_model(self):
        rho = ri.random_density(np.random.default_rng(3), 4)
        x = {1.0: {"*": 1.0}}
        m = LhvModel(DiscreteProbabilitySpace((("*", 1.0),)), np.eye(4), np.eye(4), rho, x, x)
        assert lhv_product_expect(m) == pytest.approx(1.0)

    def test_balanced_atom_gives_zero(self):
        rho = pure_density(np.kron(PLUS, PLUS))
        half = {1.0: {"*": 0.5}, -1.0: {"*": 0.5}}
        m = LhvModel(DiscreteProbabilitySpace((("*", 1.0),)), Z4A, Z4B, rho, half, half)
        assert lhv_product_expect(m) == pytest.approx(0.0, abs=1e-15)

    def test_tolerance_escape_is_reported(self, monkeypatch):
        m, _ = two_atom_model()
        import qchsh.lhv as lhv_mod

        monkeypatch.setattr(lhv_mod, "lhv_check", lambda *_a, **_k: True)
        bad = {1.0: {"w0": 0.0, "w1": 1.0}, -1.0: {"w0": 1.0, "w1": 0.0}}
        with pytest.raises(InternalInvariantError):
            lhv_mod.lhv_product_expect(LhvModel(m.space, m.A, m.B, m.rho, bad, m.Y))


class TestSeparableModels:
    def test_plus_plus(self):
        cfg, _ = canonical_config()
        plus = pure_density(PLUS)
        model = lhv_from_separable(SeparableDecomposition(((1.0, plus, plus),)), cfg)
        assert model.check()
        assert model.chsh_value() == pytest.approx(-2 * S, abs=1e-12)
        assert model.reproduces(cfg, model.rho)

    def test_random(self, rng):
        for _ in range(30):
            n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            cfg = ri.random_local_config(rng, n, m)
            model = lhv_from_separable(ri.random_separable_decomposition(rng, n, m), cfg)
            assert model.check()
            for (i, j), e in model.correlations().items():
                a, b = cfg.alice[i], cfg.bob[j]
                assert e == pytest.approx(np.trace(a @ b @ model.rho.mat).real, abs=1e-8)
            assert abs(model.chsh_value()) <= 2 + 1e-6
            assert model.chsh_value() == pytest.approx(chsh_expect(cfg, model.rho), abs=1e-8)

    def test_shared_tables(self, rng):
        cfg = ri.random_local_config(rng, 2, 2)
        model = lhv_from_separable(ri.random_separable_decomposition(rng, 2, 2), cfg)
        assert model.pair(0, 0).X is model.pair(0, 1).X
        assert model.pair(0, 1).Y is model.pair(1, 1).Y

    def test_requires_local(self, rng):
        cfg = ri.random_commuting_config(rng, 2, 2)
        with pytest.raises(ModelError):
            lhv_from_separable(ri.random_separable_decomposition(rng, 2, 2), cfg)

    def test_requires_matching_dims(self, rng):
        cfg = ri.random_local_config(rng, 2, 2)
        with pytest.raises(ModelError):
            lhv_from_separable(ri.random_separable_decomposition(rng, 1, 4), cfg)

    def test_reproduces_detects_other_state(self, rng):
        cfg, singlet = canonical_config()
        plus = pure_density(PLUS)
        model = lhv_from_separable(SeparableDecomposition(((1.0, plus, plus),)), cfg)
        assert not model.reproduces(cfg, singlet)


class TestClassical:
    def test_examples(self):
        assert DeterministicStrategy(1, 1, 1, 1).c_value() == 2
        assert DeterministicStrategy(1, 1, 1, -1).c_value() == -2

    def test_table(self):
        table = classical_strategy_table()
        assert len(table) == 16
        assert len({(s.a0, s.a1, s.b0, s.b1) for s, _ in table}) == 16
        # brute force straight from the formula
        for s, c in table:
            assert c == s.a0 * s.b1 - s.a0 * s.b0 + s.a1 * s.b0 + s.a1 * s.b1
            assert c in (-2, 2)
        assert classical_max() == 2

    def test_invalid_answer(self):
        with pytest.raises(RangeError):
            DeterministicStrategy(1, 0, 1, 1)

    def test_mixed(self, rng):
        for _ in range(100):
            assert abs(ri.random_mixed_strategy(rng).c_value()) <= 2 + 1e-12

    def test_mixed_invalid(self):
        s = all_deterministic_strategies()[0]
        with pytest.raises(RangeError):
            MixedStrategy(((0.5, s),))
        with pytest.raises(RangeError):
            MixedStrategy(())

    def test_uniform_mixture_is_zero(self):
        strategies = all_deterministic_strategies()
        mixed = MixedStrategy(tuple((1 / 16, s) for s in strategies))
        assert mixed.c_value() == pytest.approx(0.0, abs=1e-15)


class TestScore:
    def test_canonical(self):
        c, score = score_from_expectations(-S, S, S, S)
        assert c == pytest.approx(2 * math.sqrt(2))
        assert score == pytest.approx(math.sqrt(2) / 2)

    def test_zero(self):
        assert score_from_expectations(0, 0, 0, 0) == (0, 0)

    def test_ones(self):
        assert score_from_expectations(1, 1, 1, 1) == (2, 0.5)

    def test_range(self):
        with pytest.raises(RangeError):
            score_from_expectations(1.1, 0, 0, 0)
