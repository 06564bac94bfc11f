"""Pure-numpy reference implementations of the hot kernels."""
import numpy as np


def jacobi_sweeps(a, schedule, max_sweeps, tol):
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    norm = np.sqrt(np.sum(np.abs(a) ** 2))
    offmask = ~np.eye(n, dtype=bool)
    rounds = [r[r[:, 0] >= 0] for r in schedule]
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(a[offmask]) ** 2))
        if off <= tol * norm:
            return np.real(np.diag(a)).copy(), v, sweep, True
        if sweep == max_sweeps:
            break
        for pairs in rounds:
            if pairs.shape[0] == 0:
                continue
            p = pairs[:, 0]
            q = pairs[:, 1]
            apq = a[p, q]
            b = np.abs(apq)
            active = b > 0.0
            e = np.ones_like(apq)
            e[active] = apq[active] / b[active]
            app = a[p, p].real
            aqq = a[q, q].real
            bsafe = np.where(active, b, 1.0)
            theta = (aqq - app) / (2.0 * bsafe)
            big = np.abs(theta) > 1e150
            with np.errstate(over="ignore"):
                t = 1.0 / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(big, 0.5 / np.where(big, np.abs(theta), 1.0), t)
            t = np.where(theta < 0.0, -t, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            jpq = s * e
            jqp = -s * np.conj(e)

            cp = a[:, p].copy()
            cq = a[:, q]
            a[:, p] = cp * c + cq * jqp
            a[:, q] = cp * jpq + cq * c
            rp = a[p, :].copy()
            rq = a[q, :]
            a[p, :] = c[:, None] * rp + np.conj(jqp)[:, None] * rq
            a[q, :] = np.conj(jpq)[:, None] * rp + c[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real

            vp = v[:, p].copy()
            vq = v[:, q]
            v[:, p] = vp * c + vq * jqp
            v[:, q] = vp * jpq + vq * c
    return np.real(np.diag(a)).copy(), v, max_sweeps, False


def lower_tri_inverse(t):
    t = np.asarray(t, dtype=np.complex128)
    n = t.shape[0]
    x = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        rhs = -(t[i, :i] @ x[:i, :])
        rhs[i] += 1.0
        x[i, :] = rhs / t[i, i]
    return x


def qam_nearest(y, points, chunk=8192):
    y = np.asarray(y, dtype=np.complex128).ravel()
    points = np.asarray(points, dtype=np.complex128)
    out = np.empty(y.shape[0], dtype=np.int64)
    for start in range(0, y.shape[0], chunk):
        blk = y[start:start + chunk]
        d = np.abs(blk[:, None] - points[None, :]) ** 2
        out[start:start + chunk] = np.argmin(d, axis=1)
    return out
