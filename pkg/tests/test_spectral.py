import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchsh import random_instances as ri
from qchsh.errors import ConvergenceError, DimensionError, PreconditionError
from qchsh.spectral import (
    is_hermitian,
    is_positive_semidefinite,
    is_projector,
    is_unitary,
    l2_op_norm,
    real_diag_decomp,
    singular_values,
    spectrum,
)
from qchsh.states import HADAMARD, KET0, KET1, MINUS, PAULI_X, PAULI_Z, PLUS

from conftest import random_hermitian_np


def proj(v):
    v = np.asarray(v).reshape(-1, 1)
    return v @ v.conj().T


class TestPredicates:
    def test_hermitian(self, rng):
        assert is_hermitian(PAULI_Z)
        assert not is_hermitian([[0, 1], [0, 0]])
        a, b = random_hermitian_np(rng, 2), random_hermitian_np(rng, 3)
        assert is_hermitian(np.kron(a, b))

    def test_non_square(self):
        for f in (is_hermitian, is_unitary, is_positive_semidefinite):
            with pytest.raises(DimensionError):
                f(np.ones((2, 3)))

    def test_unitary(self):
        assert is_unitary(HADAMARD)
        assert is_unitary(np.kron(HADAMARD, np.eye(2)))
        assert not is_unitary(2 * np.eye(2))

    def test_psd(self):
        assert is_positive_semidefinite(proj(PLUS))
        assert not is_positive_semidefinite(np.diag([1, -1]))
        assert is_positive_semidefinite(np.eye(2) / 2)

    def test_projector(self):
        assert is_projector(proj(KET0))
        assert not is_projector(2 * proj(KET0))
        assert not is_projector(np.ones((2, 3)))


class TestDiagonalization:
    def test_already_diagonal(self):
        dec = real_diag_decomp(np.diag([3.0, 7.0]))
        np.testing.assert_allclose(dec.eigenvalues, [7, 3])
        # permutation times phases
        np.testing.assert_allclose(np.abs(dec.U), [[0, 1], [1, 0]], atol=1e-14)

    def test_pauli_x(self):
        dec = real_diag_decomp(PAULI_X)
        np.testing.assert_allclose(dec.eigenvalues, [1, -1], atol=1e-14)
        assert abs(np.vdot(dec.column(0), PLUS)) == pytest.approx(1.0)
        assert abs(np.vdot(dec.column(1), MINUS)) == pytest.approx(1.0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(PreconditionError):
            real_diag_decomp([[0, 1], [0, 0]])

    def test_convergence_error(self, rng):
        with pytest.raises(ConvergenceError):
            real_diag_decomp(random_hermitian_np(rng, 6), max_sweeps=1)

    def test_one_by_one(self):
        dec = real_diag_decomp([[2.5]])
        assert dec.eigenvalues.tolist() == [2.5]

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 16])
    def test_against_eigh(self, rng, n):
        a = random_hermitian_np(rng, n)
        dec = real_diag_decomp(a)
        np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-10)
        assert is_unitary(dec.U, 1e-10)
        np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-10)

    def test_descending(self, rng):
        ev = real_diag_decomp(random_hermitian_np(rng, 7)).eigenvalues
        assert np.all(np.diff(ev) <= 0)

    def test_degenerate(self, rng):
        a = ri.random_degenerate_hermitian(rng, 8)
        dec = real_diag_decomp(a)
        np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-10)
        np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-10)


class TestSpectrum:
    def test_identity(self):
        sp = spectrum(np.eye(2))
        assert len(sp) == 1
        (e,) = sp
        assert e.eigenvalue == pytest.approx(1.0) and e.multiplicity == 2
        np.testing.assert_allclose(e.projector, np.eye(2), atol=1e-14)

    def test_pauli_z(self):
        sp = spectrum(PAULI_Z)
        assert sp.eigenvalues == pytest.approx((1.0, -1.0))
        np.testing.assert_allclose(sp.projectors[0], proj(KET0), atol=1e-14)
        np.testing.assert_allclose(sp.projectors[1], proj(KET1), atol=1e-14)

    def test_plus_minus_observable(self):
        a = proj(PLUS) - proj(MINUS)
        sp = spectrum(a)
        assert sp.eigenvalues == pytest.approx((1.0, -1.0))
        np.testing.assert_allclose(sp.projectors[0], proj(PLUS), atol=1e-12)
        np.testing.assert_allclose(sp.projectors[1], proj(MINUS), atol=1e-12)

    def test_groups_near_equal(self):
        sp = spectrum(np.diag([1.0, 1.0 + 1e-10, -1.0]))
        assert [e.multiplicity for e in sp] == [2, 1]
        assert sp.eigenvalues[0] == pytest.approx(1.0 + 5e-11, abs=1e-15)

    def test_keeps_separated(self):
        assert len(spectrum(np.diag([1.0, 1.0 + 1e-6]))) == 2

    def test_multiplicity_matches_integer_spectrum(self, rng):
        evals = np.array([2, 2, 0, -1, -1, -1], dtype=float)
        u = ri.random_unitary(rng, 6)
        sp = spectrum((u * evals) @ u.conj().T)
        assert sp.eigenvalues == pytest.approx((2, 0, -1), abs=1e-9)
        assert [e.multiplicity for e in sp] == [2, 1, 3]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.booleans())
def test_spectrum_is_a_resolution(n, seed, degenerate):
    rng = np.random.default_rng(seed)
    a = ri.random_degenerate_hermitian(rng, n) if degenerate else ri.random_hermitian(rng, n)
    sp = spectrum(a)
    np.testing.assert_allclose(sum(sp.projectors), np.eye(n), atol=1e-8)
    np.testing.assert_allclose(sum(e.eigenvalue * e.projector for e in sp), a, atol=1e-8)
    assert sum(e.multiplicity for e in sp) == n
    for i, p in enumerate(sp.projectors):
        assert is_projector(p, 1e-8)
        assert round(np.trace(p).real) == sp.entries[i].multiplicity
        for q in sp.projectors[i + 1:]:
            assert np.max(np.abs(p @ q)) <= 1e-8


def power_iteration_norm(a, iters=2000, seed=0):
    g = a.conj().T @ a
    v = np.random.default_rng(seed).normal(size=(a.shape[0], 1)) + 0j
    for _ in range(iters):
        v = g @ v
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        v /= nv
    return math.sqrt(abs(np.vdot(v, g @ v)))


class TestNorms:
    def test_singular_values_examples(self):
        np.testing.assert_allclose(singular_values(np.eye(3)), [1, 1, 1])
        np.testing.assert_allclose(singular_values(np.diag([2, -3])), [3, 2])
        np.testing.assert_allclose(singular_values([[0, 1], [0, -1]]), [math.sqrt(2), 0], atol=1e-12)

    def test_involution_norm(self):
        assert l2_op_norm(np.eye(4)) == pytest.approx(1.0)
        assert l2_op_norm(PAULI_X) == pytest.approx(1.0)
        assert l2_op_norm(PAULI_Z) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_against_svd_oracle(self, rng, n):
        a = ri.ginibre(rng, n)
        np.testing.assert_allclose(singular_values(a), np.linalg.svd(a, compute_uv=False), atol=1e-10)

    def test_power_iteration_oracle(self, rng):
        # random Ginibre matrices have a simple top singular value
        for n in (2, 3, 6):
            a = ri.ginibre(rng, n)
            assert l2_op_norm(a) == pytest.approx(power_iteration_norm(a), abs=1e-6)

    def test_random_unit_vector_sup(self, rng):
        a = ri.ginibre(rng, 4)
        vs = ri.ginibre(rng, 4, 10_000)
        vs /= np.linalg.norm(vs, axis=0)
        best = np.max(np.linalg.norm(a @ vs, axis=0))
        assert best <= l2_op_norm(a) + 1e-8
        assert best >= 0.9 * l2_op_norm(a)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_norm_inequalities(n, seed):
    rng = np.random.default_rng(seed)
    a, b = ri.ginibre(rng, n), ri.ginibre(rng, n)
    na, nb = l2_op_norm(a), l2_op_norm(b)
    assert l2_op_norm(a + b) <= na + nb + 1e-10
    assert l2_op_norm(a @ b) <= na * nb + 1e-10
    assert l2_op_norm(a @ b - b @ a) <= 2 * na * nb + 1e-10
    h = ri.random_hermitian(rng, n)
    assert l2_op_norm(h) == pytest.approx(math.sqrt(l2_op_norm(h @ h)), abs=1e-8)
