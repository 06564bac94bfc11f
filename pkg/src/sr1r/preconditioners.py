"""Jacobi / Gauss-Seidel / SSOR left preconditioning for the Schulz loop."""
from enum import Enum

import numpy as np

from . import kernels
from .errors import DimensionError, SingularError
from .matrix import as_matrix, frobenius_residual
from .schulz import InversionReport, SchulzConfig, gershgorin_omega, run_schulz


class PreconditionerKind(str, Enum):
    JACOBI = "jacobi"
    GAUSS_SEIDEL = "gs"
    SSOR = "ssor"


def split_dl(a):
    """Diagonal part ``D`` and strict lower triangle ``L`` of ``A``."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    return np.diag(np.diag(a)), np.tril(a, -1)


def _check_diag(a):
    d = np.diag(a)
    if np.any(np.abs(d) == 0.0):
        raise SingularError("preconditioner needs a zero-free diagonal")
    return d


def preconditioner_matrix(a, kind):
    kind = PreconditionerKind(kind)
    d, l = split_dl(a)
    diag = _check_diag(d)
    if kind is PreconditionerKind.JACOBI:
        return d
    if kind is PreconditionerKind.GAUSS_SEIDEL:
        return d + l
    dl = d + l
    return (dl / diag) @ dl.conj().T


def lower_triangular_inverse(t):
    """Inverse of a lower-triangular matrix by column-wise forward substitution."""
    t = as_matrix(t)
    if t.shape[0] != t.shape[1]:
        raise DimensionError(f"expected a square matrix, got {t.shape}")
    d = np.abs(np.diag(t))
    if np.any(d == 0.0) or d.min() <= 1e-300:
        raise SingularError("triangular matrix has a zero on its diagonal")
    return kernels.lower_tri_inverse(t)


def preconditioner_inverse(a, kind):
    """``P⁻¹`` built from triangular inverses only (never a dense solve).

    SSOR uses ``P⁻¹ = (D+L)⁻ᴴ D (D+L)⁻¹``.
    """
    kind = PreconditionerKind(kind)
    d, l = split_dl(a)
    diag = _check_diag(d)
    if kind is PreconditionerKind.JACOBI:
        return np.diag(1.0 / diag)
    dl_inv = lower_triangular_inverse(d + l)
    if kind is PreconditionerKind.GAUSS_SEIDEL:
        return dl_inv
    return (dl_inv.conj().T * diag) @ dl_inv


def preconditioned_matrix(a, kind):
    a = as_matrix(a)
    return preconditioner_inverse(a, kind) @ a


def preconditioned_invert(a, kind, config=None):
    """Schulz on ``R_pre = P⁻¹ A`` (generally non-Hermitian), then
    ``A⁻¹ = R_pre⁻¹ P⁻¹``. ω comes from the Gershgorin bound on ``R_pre``."""
    config = config or SchulzConfig()
    kind = PreconditionerKind(kind)
    a = as_matrix(a)
    p_inv = preconditioner_inverse(a, kind)
    r_pre = p_inv @ a
    omega = gershgorin_omega(r_pre)
    x, trace = run_schulz(r_pre, omega, config)
    inv = x @ p_inv
    return InversionReport(
        inverse=inv,
        residual_trace=trace,
        iterations=len(trace) - 1,
        omega=omega,
        method=kind.value,
        final_residual=frobenius_residual(a, inv),
    )
