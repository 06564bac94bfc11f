"""Power iteration and the trace-shifted variant for the smallest eigenvector."""
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .errors import ZeroVectorError
from .matrix import as_hermitian

DEFAULT_TAU = 1
DEFAULT_ETA = 1e-6


@dataclass(frozen=True)
class PowerIterationResult:
    eigenvalue: float
    eigenvector: np.ndarray
    iterations: int
    converged_by_tolerance: bool
    trace: np.ndarray = field(repr=False, default=None)


def random_start(n, seed, stream_id=_rng.POWER_DOMINANT):
    """Normalized complex Gaussian start vector; one re-draw if it is ~0."""
    gen = _rng.stream(seed, stream_id)
    for _ in range(2):
        u = _rng.complex_normal(gen, n)
        nrm = np.linalg.norm(u)
        if nrm > 1e-300:
            return u, nrm
    raise ZeroVectorError("random start vector is numerically zero")


def power_iterate(g, tau=DEFAULT_TAU, eta=None, seed=0, start=None,
                  max_iterations=10_000, stream_id=_rng.POWER_DOMINANT):
    """Dominant eigenpair of a Hermitian PSD matrix by multiply-and-normalize.

    Fixed mode (default) runs exactly ``tau`` cycles after normalizing the
    start vector. Passing ``eta`` switches to tolerance mode: stop once
    consecutive norm estimates differ by less than ``eta`` (the first
    comparison is against the norm of the raw start vector), giving up after
    ``max_iterations``.

    The eigenvalue estimate is ``||G u||``, not a Rayleigh quotient.
    """
    g = as_hermitian(g)
    n = g.shape[0]
    if eta is None:
        if tau is None or int(tau) < 1:
            raise ValueError("tau must be >= 1 in fixed-iteration mode")
        budget = int(tau)
    else:
        if eta <= 0:
            raise ValueError("eta must be positive")
        budget = int(max_iterations)

    if start is None:
        u, lam_old = random_start(n, seed, stream_id)
    else:
        u = np.asarray(start, dtype=np.complex128).copy()
        lam_old = np.linalg.norm(u)
        if lam_old <= 1e-300:
            raise ZeroVectorError("start vector is zero")
    u = u / lam_old

    trace = []
    converged = False
    lam = lam_old
    for _ in range(budget):
        v = g @ u
        lam = np.linalg.norm(v)
        if lam == 0.0:
            raise ZeroVectorError("iterate fell into the null space of G")
        u = v / lam
        trace.append(lam)
        if eta is not None and abs(lam - lam_old) < eta:
            converged = True
            break
        lam_old = lam
    return PowerIterationResult(float(lam), u, len(trace), converged, np.array(trace))


def shifted_matrix(a):
    """``trace(A) I - A``; its dominant eigenvector is A's smallest one."""
    a = as_hermitian(a)
    phi = -a.copy()
    phi[np.diag_indices_from(phi)] += np.trace(a).real
    return phi


def smallest_eigvec(a, tau=DEFAULT_TAU, seed=0):
    return power_iterate(shifted_matrix(a), tau=tau, seed=seed, stream_id=_rng.POWER_SHIFTED)
