"""Dense complex matrix helpers and the Jacobi eigendecomposition oracle.

Matrices are plain ``complex128`` ndarrays. The functions here validate at
the boundary and otherwise stay out of the way.
"""
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    DimensionError,
    NonConvergenceError,
    SingularError,
    ValidationError,
)

HERMITIAN_RTOL = 1e-12
EVD_MAX_SWEEPS = 100
EVD_OFF_TOL = 1e-12


def as_matrix(x):
    """Return ``x`` as a finite 2-D complex128 array."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def hermitian_violation(a, rtol=HERMITIAN_RTOL):
    """First ``(i, j)`` breaking conjugate symmetry, or ``None``."""
    scale = np.max(np.abs(a)) if a.size else 0.0
    bad = np.abs(a - a.conj().T) > rtol * scale
    if not bad.any():
        return None
    i, j = np.argwhere(bad)[0]
    return int(i), int(j)


def as_hermitian(x, rtol=HERMITIAN_RTOL):
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    where = hermitian_violation(a, rtol)
    if where is not None:
        raise ValidationError(f"matrix is not Hermitian at entry {where}")
    return a


def hermitize(a):
    """Project onto the Hermitian part; removes round-off asymmetry."""
    return 0.5 * (a + a.conj().T)


def gram(h):
    """``A = H Hᴴ`` for a wide (or square) channel ``H`` of shape N×M, N ≤ M."""
    h = as_matrix(h)
    n, m = h.shape
    if n > m:
        raise DimensionError(f"gram expects N <= M, got {n}x{m}")
    return hermitize(h @ h.conj().T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order and the matching unitary eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def inverse(self):
        s = np.abs(self.eigenvalues)
        _ratio(s.max(), s.min())
        u = self.eigenvectors
        return (u / self.eigenvalues) @ u.conj().T

    def condition_number(self):
        s = np.abs(self.eigenvalues)
        return _ratio(s.max(), s.min())


def evd_hermitian(a, max_sweeps=EVD_MAX_SWEEPS, tol=EVD_OFF_TOL):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Deterministic for a fixed input. Raises :class:`NonConvergenceError` if the
    off-diagonal Frobenius mass has not dropped below ``tol * ||A||_F`` after
    ``max_sweeps`` sweeps.
    """
    a = as_hermitian(a)
    w, v, sweeps, ok = kernels.jacobi_sweeps(a, max_sweeps, tol)
    if not ok:
        raise NonConvergenceError(f"Jacobi EVD did not converge in {max_sweeps} sweeps")
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v, int(sweeps))


def frobenius_residual(a, x):
    """``||I - A X||_F``."""
    a = as_matrix(a)
    x = as_matrix(x)
    if a.shape[0] != a.shape[1] or a.shape != x.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {x.shape}")
    e = -(a @ x)
    e[np.diag_indices_from(e)] += 1.0
    return float(np.linalg.norm(e))


def _ratio(smax, smin):
    if smax == 0.0:
        raise SingularError("zero matrix has no condition number")
    if smin <= 1e-14 * smax:
        raise SingularError("matrix is numerically singular")
    return float(smax / smin)


def condition_number(a):
    """Ratio of extreme singular values (absolute eigenvalues) of a Hermitian matrix."""
    return evd_hermitian(a).condition_number()


def general_condition_number(a):
    """Ratio of extreme singular values for any square matrix (via LAPACK SVD)."""
    a = as_matrix(a)
    s = np.linalg.svd(a, compute_uv=False)
    return _ratio(float(s[0]), float(s[-1]))


def from_spectrum(eigenvalues, u=None):
    """Build ``U diag(λ) Uᴴ``; ``U`` defaults to the identity."""
    lam = np.asarray(eigenvalues, dtype=float)
    if u is None:
        return np.diag(lam).astype(np.complex128)
    return hermitize((u * lam) @ u.conj().T)


def random_unitary(n, rng):
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


# -- matrix text format -----------------------------------------------------
# line 1: "N M"; then N*M lines "re im", row-major.


def write_matrix(path, x):
    x = as_matrix(x)
    n, m = x.shape
    lines = [f"{n} {m}"]
    lines.extend(f"{float(z.real)!r} {float(z.imag)!r}" for z in x.ravel())
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path, hermitian=None):
    """Parse a matrix file. Square files are checked for conjugate symmetry
    unless ``hermitian=False``; parse errors carry 1-based line numbers."""
    text = Path(path).read_text().splitlines()
    if not text:
        raise ValidationError(f"{path}: line 1: empty file")
    try:
        n, m = (int(t) for t in text[0].split())
    except ValueError:
        raise ValidationError(f"{path}: line 1: expected 'N M', got {text[0]!r}") from None
    if n < 1 or m < 1:
        raise ValidationError(f"{path}: line 1: dimensions must be positive")
    body = text[1:]
    if len(body) < n * m:
        raise ValidationError(f"{path}: line {len(text) + 1}: expected {n * m} entries, found {len(body)}")
    vals = np.empty(n * m, dtype=np.complex128)
    for k in range(n * m):
        parts = body[k].split()
        try:
            re, im = (float(t) for t in parts)
        except ValueError:
            raise ValidationError(f"{path}: line {k + 2}: expected 're im', got {body[k]!r}") from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ValidationError(f"{path}: line {k + 2}: non-finite entry")
        vals[k] = complex(re, im)
    if any(line.strip() for line in body[n * m:]):
        raise ValidationError(f"{path}: line {n * m + 2}: trailing data")
    x = vals.reshape(n, m)
    check = (n == m) if hermitian is None else hermitian
    if check:
        if n != m:
            raise ValidationError(f"{path}: Hermitian matrix must be square, got {n}x{m}")
        where = hermitian_violation(x)
        if where is not None:
            i, j = where
            raise ValidationError(
                f"{path}: not Hermitian: entry ({i},{j}) (line {i * m + j + 2}) "
                f"does not match conj of ({j},{i}) (line {j * m + i + 2})"
            )
    return x
