import numpy as np
import pytest

from conftest import random_pd
from sr1r.analysis import (
    as_spectrum,
    char_poly_eval,
    char_poly_roots,
    convergence_factors,
    cost_report,
    esf,
    placement_measure,
    subblock_eigs,
    xi_perp,
)
from sr1r.errors import DegenerateSpectrumError, ValidationError
from sr1r.matrix import evd_hermitian

BETA = (1101.1 - 1000) / 3000


def theta_of(lam, p, xi):
    return np.diag(lam) - xi * np.outer(p, np.conj(p))


def random_unit(n, rng):
    p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return p / np.linalg.norm(p)


def random_spectrum(n, rng):
    return np.sort(10 ** rng.uniform(-2, 2, n))[::-1]


def smallest_eig(m):
    return evd_hermitian(m).eigenvalues[-1]


class TestMeasure:
    def test_example(self):
        assert placement_measure([100, 33.75, 1, -33.65]) == pytest.approx(32.65 / 99)

    def test_lower_boundary(self):
        assert placement_measure([10, 5, 2, -2]) == 0.0

    def test_upper_boundary(self):
        assert placement_measure([10, 5, 2, -10]) == 1.0

    def test_unsorted_input(self):
        assert placement_measure([-33.65, 1, 100, 33.75]) == placement_measure([100, 33.75, 1, -33.65])

    def test_errors(self):
        with pytest.raises(ValidationError):
            placement_measure([1, 2])
        with pytest.raises(DegenerateSpectrumError):
            placement_measure([3, 3, 3, 0])
        with pytest.raises(ValidationError):
            as_spectrum([1, np.nan, 2])


class TestEsf:
    def test_three(self):
        np.testing.assert_allclose(esf([1, 2, 3]), [1, 6, 11, 6])

    def test_against_poly(self, rng):
        v = rng.uniform(0.1, 3, 6)
        # Π(x + λ) coefficients
        np.testing.assert_allclose(esf(v), np.poly(-v), rtol=1e-12)


class TestCharPoly:
    def test_two_by_two(self):
        assert char_poly_eval([2, 1], [1, 0], 1.0, 1.0) == pytest.approx(0.0, abs=1e-14)
        for t in (0.0, 0.5, 3.0):
            assert char_poly_eval([2, 1], [1, 0], 1.0, t) == pytest.approx(t * t - 2 * t + 1)

    def test_xi_zero(self, rng):
        lam = random_spectrum(5, rng)
        p = random_unit(5, rng)
        assert char_poly_eval(lam, p, 0.0, lam[0]) == pytest.approx(0.0, abs=1e-9 * lam[0] ** 5)
        t = 0.37
        assert char_poly_eval(lam, p, 0.0, t) == pytest.approx(np.prod(lam - t), rel=1e-10)

    def test_matches_determinant(self, rng):
        for _ in range(20):
            lam = random_spectrum(5, rng)
            p = random_unit(5, rng)
            xi, t = rng.uniform(-5, 5), rng.uniform(-3, 3)
            det = np.linalg.det(theta_of(lam, p, xi) - t * np.eye(5)).real
            assert char_poly_eval(lam, p, xi, t) == pytest.approx(det, rel=1e-8, abs=1e-10 * lam[0] ** 5)

    def test_requires_unit_p(self):
        with pytest.raises(ValidationError):
            char_poly_eval([2, 1], [1, 1], 1.0, 0.0)

    def test_overflow_guard(self):
        lam = np.full(200, 1e300)
        p = np.ones(200) / np.sqrt(200)
        with pytest.raises(OverflowError):
            char_poly_eval(lam, p, 1.0, 0.0)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_roots_match_oracle(self, rng, sign):
        for _ in range(100):
            lam = random_spectrum(6, rng)
            p = random_unit(6, rng)
            xi = sign * rng.uniform(0.01, 2) * lam[0]
            roots = np.sort(char_poly_roots(lam, p, xi))
            ref = np.sort(evd_hermitian(theta_of(lam, p, xi)).eigenvalues)
            assert np.max(np.abs(roots - ref)) <= 1e-8 * lam[0]


class TestXiPerp:
    def test_aligned_with_large(self):
        assert xi_perp([2, 1], [1, 0]) == pytest.approx(2.0)

    def test_aligned_with_small(self):
        assert xi_perp([2, 1], [0, 1]) == pytest.approx(1.0)

    def test_singular_at_threshold(self, rng):
        lam = random_spectrum(5, rng)
        p = random_unit(5, rng)
        xp = xi_perp(lam, p)
        assert abs(smallest_eig(theta_of(lam, p, xp))) <= 1e-9 * lam[0]

    def test_sign_flip(self, rng):
        for _ in range(500):
            lam = random_spectrum(5, rng)
            p = random_unit(5, rng)
            xp = xi_perp(lam, p)
            assert smallest_eig(theta_of(lam, p, 0.99 * xp)) > 0
            assert smallest_eig(theta_of(lam, p, 1.01 * xp)) < 0

    def test_monotone_past_threshold(self, rng):
        for _ in range(500):
            lam = random_spectrum(5, rng)
            p = random_unit(5, rng)
            xp = xi_perp(lam, p)
            x1, x2 = np.sort(xp * (1 + rng.uniform(0.01, 3, 2)))
            assert smallest_eig(theta_of(lam, p, x2)) < smallest_eig(theta_of(lam, p, x1))

    def test_positive_spectrum_required(self):
        with pytest.raises(ValidationError):
            xi_perp([1.0, 0.0], [1, 0])


class TestSubblock:
    def test_example(self):
        x1, x2 = subblock_eigs(1000, 0.1, 1000, np.sqrt(1 - BETA**2), BETA)
        assert x1 == pytest.approx(33.75, abs=0.01)
        assert x2 == pytest.approx(-33.65, abs=0.01)

    def test_matches_embedded_evd(self):
        alpha = np.sqrt(1 - BETA**2)
        p = np.array([alpha, 0, 0, BETA])
        ref = evd_hermitian(theta_of([1000, 100, 1, 0.1], p, 1000)).eigenvalues
        x1, x2 = subblock_eigs(1000, 0.1, 1000, alpha, BETA)
        np.testing.assert_allclose(np.sort(ref), np.sort([100, 1, x1, x2]), atol=1e-9 * 1000)

    def test_random_embedded(self, rng):
        for _ in range(50):
            l0, l3 = rng.uniform(10, 1000), rng.uniform(0.01, 1)
            xi, beta = rng.uniform(0, 2 * l0), rng.uniform(-1, 1)
            alpha = np.sqrt(1 - beta**2)
            ref = evd_hermitian(np.array([[l0 - xi * alpha**2, -xi * alpha * beta],
                                          [-xi * alpha * beta, l3 - xi * beta**2]])).eigenvalues
            np.testing.assert_allclose(subblock_eigs(l0, l3, xi, alpha, beta), ref, atol=1e-9 * l0)

    def test_beta_zero_limit(self):
        x1, x2 = subblock_eigs(1000, 0.1, 1000, 1.0, 0.0)
        assert x1 == pytest.approx(0.1) and x2 == pytest.approx(0.0, abs=1e-12)

    def test_linear_approximation(self):
        x1, _ = subblock_eigs(1000, 0.1, 1000, np.sqrt(1 - BETA**2), BETA)
        assert abs(x1 - BETA * 1000) / (BETA * 1000) <= 0.1 / (BETA * 1000)

    def test_not_unit(self):
        with pytest.raises(ValidationError):
            subblock_eigs(1, 1, 1, 1, 1)


class TestInterlacing:
    """Rank-1 modification sandwiches eigenvalues between neighbours of the original."""

    def test_negative_xi(self, rng):
        for _ in range(300):
            lam = random_spectrum(6, rng)
            xi = -rng.uniform(0, 2) * lam[0]
            th = evd_hermitian(theta_of(lam, random_unit(6, rng), xi)).eigenvalues
            tol = 1e-9 * lam[0]
            assert lam[0] - tol <= th[0] <= lam[0] - xi + tol
            assert np.all(lam[1:] - tol <= th[1:]) and np.all(th[1:] <= lam[:-1] + tol)

    def test_positive_xi(self, rng):
        for _ in range(300):
            lam = random_spectrum(6, rng)
            xi = rng.uniform(0, 2) * lam[0]
            th = evd_hermitian(theta_of(lam, random_unit(6, rng), xi)).eigenvalues
            tol = 1e-9 * lam[0]
            assert lam[-1] - xi - tol <= th[-1] <= lam[-1] + tol
            assert np.all(lam[1:] - tol <= th[:-1]) and np.all(th[:-1] <= lam[:-1] + tol)


class TestConvergenceFactors:
    def test_example(self):
        f = convergence_factors([4, 2, 1])
        assert f.plain == 0.5
        assert f.shifted_dominant == pytest.approx(5 / 6)
        assert f.shifted_best == pytest.approx(0.5)

    def test_equal(self):
        f = convergence_factors([3, 3, 3, 3])
        assert (f.plain, f.shifted_dominant, f.shifted_best) == (1.0, 1.0, 1.0)

    def test_ordering(self, rng):
        for _ in range(100):
            _, lam = random_pd(5, rng)
            f = convergence_factors(lam)
            assert f.shifted_best <= f.shifted_dominant <= 1.0
            assert 0 < f.plain <= 1.0

    def test_too_small(self):
        with pytest.raises(ValidationError):
            convergence_factors([2, 1])


class TestCost:
    def test_depth_512(self):
        r = cost_report(512, 512, 1, 1, 50)
        assert r.algorithm_depth == 90.0
        assert r.schulz_depth == 900.0

    def test_depth_2(self):
        assert cost_report(2, 2, 1, 1, 0).algorithm_depth == 10.0

    def test_flops_512(self):
        assert cost_report(512, 512).flop_count == 512**3 + 521 * 512**2 + 525 * 512

    def test_schulz_flops(self):
        assert cost_report(4, 4, iterations=3).schulz_flop_count == (2 * 64 + 16) * 3

    @pytest.mark.parametrize("kw", [dict(N=0, M=1), dict(N=4, M=4, tau0=-1), dict(N=2.5, M=2)])
    def test_bad(self, kw):
        with pytest.raises(ValidationError):
            cost_report(**kw)

    def test_dict(self):
        d = cost_report(8, 8).to_dict()
        assert d["N"] == 8 and d["algorithm_depth"] >= 0 and d["flop_count"] >= 0
