"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The active backend is chosen once at import time, see :mod:`sr1r._accel`.
Both backends are always importable as ``kernels.numpy_impl`` (and
``kernels.numba_impl`` when numba is enabled) so callers and benchmarks can
compare them directly.
"""
from functools import lru_cache

import numpy as np

from .._accel import HAVE_NUMBA, backend
from . import _numpy as numpy_impl

if HAVE_NUMBA:
    from . import _numba as numba_impl
    _impl = numba_impl
else:
    numba_impl = None
    _impl = numpy_impl

__all__ = [
    "backend",
    "jacobi_sweeps",
    "lower_tri_inverse",
    "qam_nearest",
    "round_robin_schedule",
]


@lru_cache(maxsize=64)
def round_robin_schedule(n):
    """Circle-method pairing of ``range(n)``: ``n-1`` rounds (``n`` if odd) of
    disjoint ``(p, q)`` pairs with ``p < q``. Slots paired with the dummy
    index carry ``-1``.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p >= n or q >= n:
                pairs.append((-1, -1))
            else:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    out = np.array(rounds, dtype=np.int64).reshape(m - 1, m // 2, 2)
    out.setflags(write=False)
    return out


def jacobi_sweeps(a, max_sweeps, tol):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    schedule = round_robin_schedule(a.shape[0])
    return _impl.jacobi_sweeps(a, schedule, max_sweeps, tol)


def lower_tri_inverse(t):
    return _impl.lower_tri_inverse(np.ascontiguousarray(t, dtype=np.complex128))


def qam_nearest(y, points):
    y = np.ascontiguousarray(np.asarray(y, dtype=np.complex128).ravel())
    points = np.ascontiguousarray(points, dtype=np.complex128)
    return _impl.qam_nearest(y, points)
