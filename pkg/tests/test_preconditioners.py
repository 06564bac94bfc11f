import numpy as np
import pytest

from conftest import random_pd
from sr1r.channels import rayleigh
from sr1r.errors import SingularError
from sr1r.matrix import condition_number, evd_hermitian, general_condition_number, gram
from sr1r.preconditioners import (
    PreconditionerKind,
    lower_triangular_inverse,
    preconditioned_invert,
    preconditioned_matrix,
    preconditioner_inverse,
    preconditioner_matrix,
    split_dl,
)

A2 = np.array([[2.0, 1.0], [1.0, 2.0]])
KINDS = list(PreconditionerKind)


class TestSplit:
    def test_identity(self):
        d, l = split_dl(np.eye(3))
        np.testing.assert_array_equal(d, np.eye(3))
        assert not l.any()

    def test_two_by_two(self):
        d, l = split_dl(A2)
        np.testing.assert_array_equal(d, np.diag([2.0, 2.0]))
        np.testing.assert_array_equal(l, [[0, 0], [1, 0]])

    def test_reconstruction(self, rng):
        a, _ = random_pd(7, rng)
        d, l = split_dl(a)
        assert np.array_equal(d + l + l.conj().T, a)


class TestPreconditionerMatrix:
    def test_jacobi(self):
        np.testing.assert_array_equal(preconditioner_matrix(A2, "jacobi"), np.diag([2.0, 2.0]))

    def test_gs(self):
        np.testing.assert_array_equal(preconditioner_matrix(A2, "gs"), [[2, 0], [1, 2]])

    def test_ssor(self):
        np.testing.assert_allclose(preconditioner_matrix(A2, "ssor"), [[2, 1], [1, 2.5]])

    def test_zero_diagonal(self):
        with pytest.raises(SingularError):
            preconditioner_matrix(np.array([[0.0, 1.0], [1.0, 1.0]]), "gs")

    def test_ssor_hermitian_pd(self, rng):
        for _ in range(20):
            a, _ = random_pd(6, rng)
            p = preconditioner_matrix(a, "ssor")
            np.testing.assert_allclose(p, p.conj().T, atol=1e-12)
            assert evd_hermitian(p).eigenvalues[-1] > 0

    @pytest.mark.parametrize("kind", KINDS)
    def test_inverse_matches_dense(self, kind, rng):
        a, _ = random_pd(8, rng)
        np.testing.assert_allclose(preconditioner_inverse(a, kind) @ preconditioner_matrix(a, kind),
                                   np.eye(8), atol=1e-10)


class TestTriangularInverse:
    def test_identity(self):
        np.testing.assert_array_equal(lower_triangular_inverse(np.eye(4)), np.eye(4))

    def test_hand(self):
        np.testing.assert_allclose(lower_triangular_inverse(np.array([[2.0, 0.0], [1.0, 2.0]])),
                                   [[0.5, 0.0], [-0.25, 0.5]])

    def test_unit_lower_random(self, rng):
        t = np.tril(rng.standard_normal((32, 32)), -1) * 0.2 + np.eye(32)
        assert np.linalg.norm(t @ lower_triangular_inverse(t) - np.eye(32)) <= 1e-10

    def test_singular(self):
        with pytest.raises(SingularError):
            lower_triangular_inverse(np.array([[1.0, 0.0], [1.0, 0.0]]))


class TestPreconditionedInvert:
    @pytest.mark.parametrize("kind", KINDS)
    def test_identity(self, kind):
        rep = preconditioned_invert(np.eye(4), kind)
        assert rep.iterations == 0 and rep.final_residual == 0.0

    def test_jacobi_constant_diagonal(self):
        r = preconditioned_matrix(A2, "jacobi")
        np.testing.assert_allclose(r, [[1, 0.5], [0.5, 1]])
        assert general_condition_number(r) == pytest.approx(3.0)
        assert condition_number(A2) == pytest.approx(3.0)

    def test_jacobi_invariance(self, rng):
        a, _ = random_pd(6, rng)
        a = a - np.diag(np.diag(a)) + 7.0 * np.eye(6)
        assert general_condition_number(preconditioned_matrix(a, "jacobi")) == pytest.approx(
            condition_number(a), rel=1e-9)

    @pytest.mark.parametrize("kind", KINDS)
    def test_oracle_recovery(self, kind, rng):
        a, _ = random_pd(8, rng)
        p_inv = preconditioner_inverse(a, kind)
        r_inv = np.linalg.inv(p_inv @ a)
        inv = evd_hermitian(a).inverse()
        assert np.linalg.norm(r_inv @ p_inv - inv) <= 1e-8 * np.linalg.norm(inv)

    def test_rayleigh_gs_converges(self):
        a = gram(rayleigh(64, 64, 0).H)
        rep = preconditioned_invert(a, "gs")
        assert rep.final_residual <= 1e-8
        assert rep.method == "gs" and rep.iterations > 0
