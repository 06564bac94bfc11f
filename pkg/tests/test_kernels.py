import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_hermitian
from sr1r import kernels
from sr1r.kernels import numba_impl, numpy_impl, round_robin_schedule

needs_numba = pytest.mark.skipif(numba_impl is None, reason="numba disabled or missing")


class TestSchedule:
    @pytest.mark.parametrize("n", [2, 3, 4, 7, 8, 16])
    def test_every_pair_once(self, n):
        sched = round_robin_schedule(n)
        seen = [tuple(p) for rnd in sched for p in rnd if p[0] >= 0]
        assert len(seen) == len(set(seen)) == n * (n - 1) // 2
        assert all(p < q for p, q in seen)

    @pytest.mark.parametrize("n", [5, 8])
    def test_rounds_are_disjoint(self, n):
        for rnd in round_robin_schedule(n):
            idx = [i for p in rnd if p[0] >= 0 for i in p]
            assert len(idx) == len(set(idx))

    def test_read_only(self):
        with pytest.raises(ValueError):
            round_robin_schedule(4)[0, 0, 0] = 9


class TestNumpyBackend:
    def test_jacobi_diagonalizes(self, rng):
        a = random_hermitian(9, rng)
        w, v, sweeps, ok = numpy_impl.jacobi_sweeps(a.copy(), round_robin_schedule(9), 100, 1e-12)
        assert ok and sweeps >= 1
        np.testing.assert_allclose((v * w) @ v.conj().T, a, atol=1e-12)

    def test_lower_inverse(self, rng):
        t = np.tril(rng.standard_normal((12, 12))) + 5 * np.eye(12)
        np.testing.assert_allclose(numpy_impl.lower_tri_inverse(t.astype(complex)) @ t,
                                   np.eye(12), atol=1e-12)

    def test_nearest_ties_go_low(self):
        pts = np.array([-1.0, 1.0], dtype=complex)
        assert numpy_impl.qam_nearest(np.array([0.0 + 0j]), pts)[0] == 0


@needs_numba
class TestBackendAgreement:
    def test_backend_name(self):
        assert kernels.backend() == "numba"

    @pytest.mark.parametrize("n", [3, 8, 17])
    def test_jacobi(self, n, rng):
        a = random_hermitian(n, rng)
        sched = round_robin_schedule(n)
        w1, v1, s1, ok1 = numpy_impl.jacobi_sweeps(a.copy(), sched, 100, 1e-12)
        w2, v2, s2, ok2 = numba_impl.jacobi_sweeps(a.copy(), sched, 100, 1e-12)
        assert ok1 and ok2 and s1 == s2
        np.testing.assert_allclose(np.sort(w1), np.sort(w2), atol=1e-12 * np.abs(w1).max())
        np.testing.assert_allclose(np.abs(v1.conj().T @ v2) ** 2 @ np.ones(n), np.ones(n),
                                   atol=1e-10)

    def test_lower_inverse(self, rng):
        t = (np.tril(rng.standard_normal((16, 16))) + 4 * np.eye(16)).astype(complex)
        np.testing.assert_allclose(numpy_impl.lower_tri_inverse(t),
                                   numba_impl.lower_tri_inverse(t), atol=1e-13)

    def test_nearest(self, rng):
        pts = np.exp(2j * np.pi * np.arange(8) / 8)
        y = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        np.testing.assert_array_equal(numpy_impl.qam_nearest(y, pts), numba_impl.qam_nearest(y, pts))


def test_env_flag_selects_numpy():
    env = dict(os.environ, SR1R_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import sr1r; print(sr1r.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
