"""Schulz (Hotelling-Bodewig) iteration for the matrix inverse."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DivergenceError, ValidationError
from .matrix import as_matrix, frobenius_residual

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 200
DIVERGENCE_LIMIT = 1e6


@dataclass
class InversionReport:
    """Result of an iterative inversion.

    ``residual_trace[k]`` is ``||I - M X_k||_F`` for the matrix ``M`` the
    Schulz loop actually ran on (A itself, R, or R_pre). ``final_residual``
    is always measured against the original A.
    """

    inverse: np.ndarray
    residual_trace: np.ndarray
    iterations: int
    omega: float
    method: str
    final_residual: float = float("nan")
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "method": self.method,
            "omega": self.omega,
            "iterations": self.iterations,
            "residual_trace": [float(r) for r in self.residual_trace],
            "final_residual": self.final_residual,
            **{k: v for k, v in self.details.items() if isinstance(v, (int, float, str, bool))},
        }


@dataclass(frozen=True)
class SchulzConfig:
    """Stopping rule for the inner Schulz loop.

    ``fixed_iterations`` runs exactly that many iterations and ignores the
    tolerance (the iteration-sweep experiments use it).
    """

    residual_tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    fixed_iterations: int = None


def gershgorin_omega(r):
    """``1 / max_n sum_i |R_nᴴ R_i|`` over the columns of ``R``.

    Bounds the spectral radius of ``RᴴR`` from above, so ``X0 = ω Rᴴ``
    satisfies ``ρ(I - ω R Rᴴ) < 1``. No symmetry of ``R`` is assumed.
    """
    r = as_matrix(r)
    if r.shape[0] != r.shape[1]:
        raise DimensionError(f"expected a square matrix, got {r.shape}")
    g = np.abs(r.conj().T @ r)
    top = g.sum(axis=1).max()
    if top == 0.0:
        raise ValidationError("gershgorin_omega of the zero matrix")
    return float(1.0 / top)


def schulz_steps(a, omega):
    """Yield ``(i, X_i, A X_i, ||I - A X_i||_F)`` for i = 0, 1, 2, ...

    The product ``A X_i`` used for the residual is the one the next update
    consumes, so tracking the residual costs no extra multiply.
    """
    n = a.shape[0]
    eye = np.eye(n)
    x = omega * a.conj().T
    ax = a @ x
    i = 0
    res = float(np.linalg.norm(eye - ax))
    while True:
        if not np.isfinite(res) or res > DIVERGENCE_LIMIT:
            raise DivergenceError(f"Schulz residual {res:.3g} at iteration {i}; omega too large?")
        yield i, x, ax, res
        x = 2.0 * x - x @ ax
        ax = a @ x
        i += 1
        res = float(np.linalg.norm(eye - ax))


def _check_square(a):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    return a


def run_schulz(a, omega, config, on_step=None):
    """Drive :func:`schulz_steps` under ``config``; returns ``(x, trace)``.

    ``on_step(i, x)`` is called for every iterate including ``X_0``.
    """
    fixed = config.fixed_iterations
    budget = int(fixed) if fixed is not None else int(config.max_iterations)
    tol = None if fixed is not None else config.residual_tolerance
    trace = []
    for i, x, _, res in schulz_steps(a, omega):
        trace.append(res)
        if on_step is not None:
            on_step(i, x)
        if i >= budget or (tol is not None and res <= tol):
            return x, np.array(trace)


def schulz_invert(a, omega=None, config=None, method="schulz"):
    """Iterate ``X_i = 2X_{i-1} - X_{i-1} A X_{i-1}`` from ``X_0 = ω Aᴴ``.

    ``omega`` defaults to :func:`gershgorin_omega`. Raises
    :class:`DivergenceError` if the residual exceeds 1e6.
    """
    config = config or SchulzConfig()
    a = _check_square(a)
    if omega is None:
        omega = gershgorin_omega(a)
    if not omega > 0:
        raise ValueError("omega must be positive")
    x, trace = run_schulz(a, omega, config)
    return InversionReport(
        inverse=x,
        residual_trace=trace,
        iterations=len(trace) - 1,
        omega=float(omega),
        method=method,
        final_residual=float(trace[-1]),
    )


def iterations_to(trace, level):
    """First iteration index whose residual is ``<= level`` (None if never)."""
    hits = np.flatnonzero(np.asarray(trace) <= level)
    return int(hits[0]) if hits.size else None


__all__ = [
    "InversionReport",
    "SchulzConfig",
    "frobenius_residual",
    "gershgorin_omega",
    "iterations_to",
    "run_schulz",
    "schulz_invert",
    "schulz_steps",
]
