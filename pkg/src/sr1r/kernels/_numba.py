"""numba-compiled kernels. Imported only when numba is enabled."""
import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _rotate(a, v, p, q):
    apq = a[p, q]
    b = abs(apq)
    if b == 0.0:
        return
    e = apq / b
    app = a[p, p].real
    aqq = a[q, q].real
    theta = (aqq - app) / (2.0 * b)
    if abs(theta) > 1e150:
        t = 0.5 / abs(theta)
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    jpq = s * e
    jqp = -s * e.conjugate()
    n = a.shape[0]
    for i in range(n):
        aip = a[i, p]
        aiq = a[i, q]
        a[i, p] = aip * c + aiq * jqp
        a[i, q] = aip * jpq + aiq * c
    cjqp = jqp.conjugate()
    cjpq = jpq.conjugate()
    for j in range(n):
        apj = a[p, j]
        aqj = a[q, j]
        a[p, j] = c * apj + cjqp * aqj
        a[q, j] = cjpq * apj + c * aqj
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    for i in range(n):
        vip = v[i, p]
        viq = v[i, q]
        v[i, p] = vip * c + viq * jqp
        v[i, q] = vip * jpq + viq * c


@njit(cache=True, nogil=True)
def jacobi_sweeps(a_in, schedule, max_sweeps, tol):
    a = a_in.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += a[i, j].real ** 2 + a[i, j].imag ** 2
    norm = math.sqrt(norm)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= tol * norm:
            w = np.empty(n)
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, sweep, True
        if sweep == max_sweeps:
            break
        for r in range(schedule.shape[0]):
            for k in range(schedule.shape[1]):
                p = schedule[r, k, 0]
                if p < 0:
                    continue
                _rotate(a, v, p, schedule[r, k, 1])
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, max_sweeps, False


@njit(cache=True, nogil=True)
def lower_tri_inverse(t):
    n = t.shape[0]
    x = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        x[j, j] = 1.0 / t[j, j]
        for i in range(j + 1, n):
            acc = 0.0 + 0.0j
            for k in range(j, i):
                acc += t[i, k] * x[k, j]
            x[i, j] = -acc / t[i, i]
    return x


@njit(cache=True, nogil=True)
def qam_nearest(y, points):
    m = y.shape[0]
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        best = np.inf
        idx = 0
        for k in range(points.shape[0]):
            dr = y[i].real - points[k].real
            di = y[i].imag - points[k].imag
            d = dr * dr + di * di
            if d < best:
                best = d
                idx = k
        out[i] = idx
    return out
