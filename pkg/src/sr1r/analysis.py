"""Theory-side utilities: placement measure, characteristic polynomial of a
rank-1 modified diagonal matrix, ξ threshold, 2×2 block roots, power
iteration convergence factors, and the depth/cost calculator."""
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateSpectrumError, ValidationError


def as_spectrum(values):
    """Descending, finite copy of ``values``."""
    v = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise ValidationError("spectrum has non-finite values")
    return np.sort(v)[::-1]


def placement_measure(theta):
    """``(θ_{N-1} + θ_{N-2}) / (θ_{N-2} - θ₀)``; inside (0, 1) exactly when
    ``-θ₀ < θ_{N-1} < -θ_{N-2}``."""
    t = as_spectrum(theta)
    if t.shape[0] < 3:
        raise ValidationError("need N >= 3")
    den = t[-2] - t[0]
    if den == 0.0:
        raise DegenerateSpectrumError("θ₀ = θ_{N-2}; measure undefined")
    return float((t[-1] + t[-2]) / den)


def esf(values):
    """Elementary symmetric functions ``e_0 .. e_N`` by expanding Π(1 + λ t)."""
    e = np.zeros(len(values) + 1)
    e[0] = 1.0
    for k, lam in enumerate(values, start=1):
        e[1:k + 1] = e[1:k + 1] + lam * e[0:k]
    return e


def _esf_leave_one_out(lam):
    n = lam.shape[0]
    out = np.empty((n, n))
    for k in range(n):
        out[k] = esf(np.delete(lam, k))
    return out


def _char_coeffs(lam, p, xi):
    """``c_n = e_{n+1}(Λ) - ξ Σ_k e_n(Λ̄_k) |p_k|²`` for n = 0..N-1."""
    w = np.abs(np.asarray(p)) ** 2
    full = esf(lam)
    loo = _esf_leave_one_out(lam)
    return full[1:] - xi * (w @ loo)


def char_poly_eval(lam, p, xi, theta):
    """``det(diag(λ) - ξ p pᴴ - θ I)`` through the ESF expansion.

    Evaluated in units of ``max|λ|`` to keep intermediate ESFs in range.
    """
    lam = np.asarray(lam, dtype=float)
    p = np.asarray(p)
    if abs(np.linalg.norm(p) - 1.0) > 1e-10:
        raise ValidationError("p must have unit norm")
    n = lam.shape[0]
    s = float(np.max(np.abs(lam))) or 1.0
    c = _char_coeffs(lam / s, p, xi / s)
    t = -theta / s
    powers = t ** np.arange(n - 1, -1, -1)
    f = t ** n + float(c @ powers)
    with np.errstate(over="raise"):
        try:
            return f * s ** n
        except FloatingPointError:
            raise OverflowError("characteristic polynomial overflows; N too large") from None


def char_poly_roots(lam, p, xi, iters=200):
    """All eigenvalues of ``diag(λ) - ξ p pᴴ`` (ξ > 0 or ξ < 0) by bisection on
    the interlacing brackets. ``lam`` must be distinct and descending and
    every ``p_k`` non-zero."""
    lam = as_spectrum(lam)
    n = lam.shape[0]
    if xi > 0:
        lo_end = lam[-1] - xi - abs(lam[-1]) - 1.0
        brackets = [(lam[k + 1], lam[k]) for k in range(n - 1)] + [(lo_end, lam[-1])]
    else:
        hi_end = lam[0] - xi + abs(lam[0]) + 1.0
        brackets = [(lam[0], hi_end)] + [(lam[k], lam[k - 1]) for k in range(1, n)]
    roots = []
    for a, b in brackets:
        fa = char_poly_eval(lam, p, xi, a)
        for _ in range(iters):
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            fm = char_poly_eval(lam, p, xi, mid)
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    return np.array(roots)


def xi_perp(lam, p):
    """``e_N(Λ) / Σ_k e_{N-1}(Λ̄_k) |p_k|²``: past this ξ the smallest
    eigenvalue of ``Λ - ξ p pᴴ`` is negative."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValidationError("xi_perp needs a positive spectrum")
    n = lam.shape[0]
    s = float(lam.max())
    scaled = lam / s
    w = np.abs(np.asarray(p)) ** 2
    loo = _esf_leave_one_out(scaled)[:, n - 1]
    return float(s * esf(scaled)[n] / (w @ loo))


def subblock_eigs(lambda0, lambda_n1, xi, alpha, beta):
    """Roots ``x1 >= x2`` of the 2×2 block
    ``[[λ₀ - ξα², -ξαβ], [-ξαβ, λ_{N-1} - ξβ²]]``."""
    if abs(alpha * alpha + beta * beta - 1.0) > 1e-9:
        raise ValidationError("alpha² + beta² must equal 1")
    a = lambda0 - xi * alpha * alpha
    d = lambda_n1 - xi * beta * beta
    off = xi * alpha * beta
    mid = 0.5 * (a + d)
    rad = np.hypot(0.5 * (a - d), off)
    return float(mid + rad), float(mid - rad)


@dataclass(frozen=True)
class ConvergenceFactors:
    plain: float
    shifted_dominant: float
    shifted_best: float


def convergence_factors(lam):
    """Power iteration rates: on A (λ₁/λ₀), and on ``trace(A) I - A`` for the
    generic start (φ₁/φ₀) and the best-case start (φ_{N-1}/φ₀)."""
    lam = as_spectrum(lam)
    if lam.shape[0] < 3:
        raise ValidationError("need N >= 3")
    tr = lam.sum()
    return ConvergenceFactors(
        plain=float(lam[1] / lam[0]),
        shifted_dominant=float((tr - lam[-2]) / (tr - lam[-1])),
        shifted_best=float((tr - lam[0]) / (tr - lam[-1])),
    )


def power_norm_estimates(diag, coeffs, iterations):
    """Closed-form ``||G u_{i-1}||`` sequence for diagonal ``G`` and start
    coefficients ``coeffs``; matches :func:`sr1r.power.power_iterate`."""
    g = np.abs(np.asarray(diag, dtype=float))
    w = np.abs(np.asarray(coeffs)) ** 2
    out = []
    for i in range(1, iterations + 1):
        num = np.sum(w * g ** (2 * i))
        den = np.sum(w * g ** (2 * (i - 1)))
        out.append(np.sqrt(num / den))
    return np.array(out)


@dataclass(frozen=True)
class CostReport:
    N: int
    M: int
    tau0: int
    tauN1: int
    iterations: int
    algorithm_depth: float
    flop_count: float
    schulz_depth: float
    schulz_flop_count: float

    def to_dict(self):
        return asdict(self)


def cost_report(N, M, tau0=1, tauN1=1, iterations=0):
    """Parallel depth and flop count of the PIA pipeline, Schulz loop
    reported separately."""
    for name, v in (("N", N), ("M", M)):
        if int(v) != v or v < 1:
            raise ValidationError(f"{name} must be a positive integer, got {v!r}")
    for name, v in (("tau0", tau0), ("tauN1", tauN1), ("iterations", iterations)):
        if int(v) != v or v < 0:
            raise ValidationError(f"{name} must be a non-negative integer, got {v!r}")
    N, M, tau0, tauN1, iterations = (int(v) for v in (N, M, tau0, tauN1, iterations))
    lgN = np.log2(N)
    lgM = np.log2(M)
    depth = (tau0 + tauN1 + 7) * lgN + lgM
    flops = N ** 3 + (tau0 + tauN1 + M + 7) * N ** 2 + (M + lgN + 4) * N
    return CostReport(
        N=N, M=M, tau0=tau0, tauN1=tauN1, iterations=iterations,
        algorithm_depth=float(depth),
        flop_count=float(flops),
        schulz_depth=float(2 * iterations * lgN),
        schulz_flop_count=float((2 * N ** 3 + N ** 2) * iterations),
    )
