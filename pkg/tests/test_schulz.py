import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_pd
from sr1r.errors import DimensionError, DivergenceError, ValidationError
from sr1r.matrix import evd_hermitian, from_spectrum, random_unitary
from sr1r.schulz import (
    SchulzConfig,
    gershgorin_omega,
    iterations_to,
    run_schulz,
    schulz_invert,
    schulz_steps,
)


class TestOmega:
    def test_identity(self):
        assert gershgorin_omega(np.eye(5)) == 1.0

    def test_scaled_identity(self):
        assert gershgorin_omega(2 * np.eye(2)) == 0.25

    def test_hand_product(self):
        assert gershgorin_omega(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(1 / 9)

    def test_zero(self):
        with pytest.raises(ValidationError):
            gershgorin_omega(np.zeros((3, 3)))

    def test_non_square(self):
        with pytest.raises(DimensionError):
            gershgorin_omega(np.ones((2, 3)))

    def test_contraction(self, rng):
        # holds for non-Hermitian input too
        for _ in range(20):
            r = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
            w = gershgorin_omega(r)
            rho = np.max(np.abs(np.linalg.eigvals(np.eye(6) - w * r @ r.conj().T)))
            assert rho < 1


class TestSchulzInvert:
    def test_identity(self):
        rep = schulz_invert(np.eye(4), omega=1.0)
        assert rep.iterations == 0
        np.testing.assert_array_equal(rep.residual_trace, [0.0])

    def test_diag_scalar_recurrence(self):
        a = np.diag([2.0, 1.0])
        rep = schulz_invert(a, omega=0.25, config=SchulzConfig(fixed_iterations=6))
        x = np.array([0.5, 0.25])
        for _ in range(6):
            x = 2 * x - np.array([2.0, 1.0]) * x * x
        np.testing.assert_allclose(np.diag(rep.inverse).real, x, rtol=1e-14)
        np.testing.assert_allclose(rep.inverse, np.diag([0.5, 1.0]), atol=1e-10)
        assert rep.residual_trace[0] == pytest.approx(0.75)

    def test_trace_length_and_monotone(self, rng):
        a, _ = random_pd(8, rng)
        rep = schulz_invert(a)
        assert len(rep.residual_trace) == rep.iterations + 1
        t = rep.residual_trace
        below = np.flatnonzero(t < 1)
        if below.size:
            tail = t[below[0]:]
            tail = tail[tail > 1e-13]
            assert np.all(np.diff(tail) < 0)

    def test_converged_matches_oracle(self, rng):
        for _ in range(10):
            a, lam = random_pd(8, rng, 0.01, 10)
            rep = schulz_invert(a, config=SchulzConfig(residual_tolerance=1e-9))
            assert rep.final_residual <= 1e-9
            inv = evd_hermitian(a).inverse()
            assert np.linalg.norm(rep.inverse - inv) <= 1e-7 * np.linalg.norm(inv)

    def test_spectrum_squaring_from_gershgorin(self):
        a = from_spectrum([1000, 100, 1, 0.1], random_unitary(4, np.random.default_rng(1)))
        t = schulz_invert(a).residual_trace
        for r0, r1 in zip(t[:-1], t[1:]):
            if r0 < 1:
                assert r1 <= r0 * r0 + 1e-12

    def test_max_iterations(self):
        a = from_spectrum([1e6, 1.0, 1.0])
        rep = schulz_invert(a, config=SchulzConfig(max_iterations=5))
        assert rep.iterations == 5

    def test_divergence(self):
        with pytest.raises(DivergenceError):
            schulz_invert(10 * np.eye(3), omega=1.0)

    def test_bad_omega(self):
        with pytest.raises(ValueError):
            schulz_invert(np.eye(2), omega=0.0)

    def test_iterations_to(self):
        assert iterations_to([3.0, 1.0, 0.1, 0.001], 0.1) == 2
        assert iterations_to([3.0, 1.0], 1e-6) is None

    def test_report_dict(self):
        d = schulz_invert(np.eye(2), omega=1.0).to_dict()
        assert d["iterations"] == 0 and d["method"] == "schulz"


class TestErrorSquaring:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**31))
    def test_inequality(self, seed):
        a, _ = random_pd(6, np.random.default_rng(seed), 0.001, 10)
        norms = []
        for i, x, ax, res in schulz_steps(a, gershgorin_omega(a)):
            e = np.eye(6) - a @ x
            norms.append(np.linalg.norm(e))
            if i == 40:
                break
        for e0, e1 in zip(norms[:-1], norms[1:]):
            assert e1 <= e0 * e0 + 1e-10 * (1 + e0 * e0)


class TestScaleCovariance:
    def test_iterates_scale(self, rng):
        a, _ = random_pd(5, rng)
        c = 3.7
        w = gershgorin_omega(a)
        xs, xc = [], []
        cfg = SchulzConfig(fixed_iterations=12)
        run_schulz(a, w, cfg, on_step=lambda i, x: xs.append(x))
        run_schulz(c * a, w / c**2, cfg, on_step=lambda i, x: xc.append(x))
        for x1, x2 in zip(xs, xc):
            np.testing.assert_allclose(x2, x1 / c, rtol=1e-12, atol=1e-12 * np.abs(x1).max())
