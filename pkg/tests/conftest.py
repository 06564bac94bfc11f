import sys

import numpy as np
import pytest

from sr1r.matrix import from_spectrum, random_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_pd(n, rng, low=0.1, high=10.0):
    """Hermitian PD matrix with log-uniform spectrum in [low, high] and Haar eigenvectors."""
    lam = np.sort(np.exp(rng.uniform(np.log(low), np.log(high), n)))[::-1]
    return from_spectrum(lam, random_unitary(n, rng)), lam


def random_hermitian(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines.items()):
            terminalreporter.write_line(line)
