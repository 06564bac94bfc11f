"""Symmetric rank-1 regularization (SR-1R) and its relatives.

The regularized matrix is ``R = A - ξ b bᴴ``; ``A⁻¹`` is recovered from an
(iterative) ``R⁻¹`` with Sherman-Morrison. Two ways to pick ``(ξ, b)``:

* :func:`sr1r_params_exact` from a full eigendecomposition, placing the
  top eigenvalue of the modified pair exactly on λ₁ so that
  ``κ(R) = λ₁ / λ_{N-2}``;
* :func:`sr1r_params_pia`, EVD-free: ``ξ = λ̂₀`` and ``b = α û₀ + β û_{N-1}``
  from two power iterations.

Also here: e-PIA candidate selection, RZF, and the rank-K (Woodbury) variant.
"""
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import (
    CandidatesFailedError,
    DegenerateSpectrumError,
    DimensionError,
    NumericalError,
    SingularError,
    ValidationError,
)
from .matrix import SpectralDecomposition, as_hermitian, as_matrix, frobenius_residual, hermitize
from .power import DEFAULT_TAU, power_iterate, smallest_eigvec
from .schulz import InversionReport, SchulzConfig, gershgorin_omega, run_schulz, schulz_steps

DEFAULT_CANDIDATES = 4


@dataclass(frozen=True)
class RankOneUpdate:
    """``(ξ, b)`` with unit ``b``. ``alpha``/``beta`` are the weights on the
    top/bottom eigenvector directions when the update was built that way."""

    xi: float
    b: np.ndarray
    alpha: float = float("nan")
    beta: float = float("nan")
    source: str = ""
    degenerate: bool = False

    def __post_init__(self):
        nb = np.linalg.norm(self.b)
        if abs(nb - 1.0) > 1e-12:
            raise ValidationError(f"b must have unit norm, got {nb!r}")


@dataclass(frozen=True)
class RankKUpdate:
    """``R = A - B diag(xi) Bᴴ``. ``orthonormal`` records whether the
    constructor guarantees orthonormal columns of ``B``."""

    B: np.ndarray
    xi: np.ndarray
    orthonormal: bool = True
    source: str = ""

    @property
    def k(self):
        return self.B.shape[1]


# -- rank-1 algebra -----------------------------------------------------------


def apply_rank1(a, u):
    a = as_matrix(a)
    if a.shape[0] != u.b.shape[0]:
        raise DimensionError("update length does not match matrix size")
    return hermitize(a - u.xi * np.outer(u.b, u.b.conj()))


def sherman_morrison(r_inv, u):
    """``A⁻¹`` from ``R⁻¹`` where ``A = R + ξ b bᴴ``."""
    r_inv = as_matrix(r_inv)
    if u.xi == 0.0:
        return r_inv.copy()
    rb = r_inv @ u.b
    br = u.b.conj() @ r_inv
    denom = 1.0 + u.xi * (u.b.conj() @ rb)
    if abs(denom) <= 1e-12:
        raise SingularError("Sherman-Morrison denominator vanished (ξ hit an eigenvalue of A)")
    return r_inv - (u.xi / denom) * np.outer(rb, br)


# -- parameter selection ------------------------------------------------------


def _rank1_from_directions(xi, alpha, beta, u_top, u_bottom, source, degenerate=False):
    b = alpha * u_top + beta * u_bottom
    b = b / np.linalg.norm(b)
    return RankOneUpdate(float(xi), b, float(alpha), float(beta), source, degenerate)


def beta2_lower_bound(lam):
    """Lower bound on β² that makes the pinned-root ξ exceed λ_{N-2} + λ_{N-1}."""
    l0, l1, lm2, lm1 = lam[0], lam[1], lam[-2], lam[-1]
    return (l1 - lm1) / (l0 - lm1) * ((l1 - l0) / (lm2 + lm1) + 1.0)


def xi_from_beta(lam, beta2):
    """ξ placing one eigenvalue of the 2×2 (top, bottom) block on λ₁."""
    l0, l1, lm1 = lam[0], lam[1], lam[-1]
    alpha2 = 1.0 - beta2
    return (l1 - l0) * (l1 - lm1) / (alpha2 * lm1 + beta2 * l0 - l1)


def pia_beta(trace_a, lam0, n):
    """β = (trace(A) - λ₀) / ((N - 1) λ₀): mean of the other eigenvalues over λ₀."""
    return (trace_a - lam0) / ((n - 1) * lam0)


def sr1r_params_exact(spec):
    """Optimal ``(ξ, b)`` from a known eigendecomposition.

    Pins the larger root of the (λ₀, λ_{N-1}) block to λ₁ and places the
    other root at ``-(λ₁ + λ_{N-2}) / 2``, the middle of
    ``[-λ₁, -λ_{N-2}]``. The remaining spectrum is untouched, so
    ``κ(R) = λ₁ / λ_{N-2}``. β² follows by inverting the ξ(β²) relation.
    Falls back to the ``ξ = λ₀`` construction when the spectrum leaves no
    room (λ₀ = λ₁ or λ₁ = λ_{N-1}) or the resulting ξ is not large enough.
    """
    lam = np.asarray(spec.eigenvalues, dtype=float)
    u = spec.eigenvectors
    n = lam.shape[0]
    if n < 3:
        raise DimensionError("SR-1R needs N >= 3")
    l0, l1, lm2, lm1 = lam[0], lam[1], lam[-2], lam[-1]
    if l0 - lm1 <= 1e-12 * abs(l0):
        raise DegenerateSpectrumError("spectrum is flat; A is already optimally conditioned")

    span = l0 - lm1
    gap_top = l1 - lm1
    beta2 = None
    if gap_top > 1e-12 * l0 and l0 - l1 > 1e-12 * l0:
        xi_target = l0 + lm1 + 0.5 * (lm2 - l1)
        beta2 = gap_top * (1.0 - (l0 - l1) / xi_target) / span
        if not 0.0 < beta2 < 1.0:
            beta2 = None
    if beta2 is not None:
        xi = xi_from_beta(lam, beta2)
        if xi > lm2 + lm1:
            beta = np.sqrt(beta2)
            return _rank1_from_directions(xi, np.sqrt(1.0 - beta2), beta, u[:, 0], u[:, -1], "exact")

    beta = min(pia_beta(lam.sum(), l0, n), 1.0)
    alpha = np.sqrt(max(0.0, 1.0 - beta * beta))
    return _rank1_from_directions(l0, alpha, beta, u[:, 0], u[:, -1], "exact-fallback")


def sr1r_params_pia(a, tau=DEFAULT_TAU, seed=0):
    """EVD-free SR-1R parameters from two power iterations.

    ``ξ = λ̂₀``; β from the trace formula; ``b = α û₀ + β û_{N-1}``
    renormalized (the two estimates need not be orthogonal). β is clipped
    to 1 when ``λ̂₀`` underestimates the mean eigenvalue. If ``λ̂₀`` equals
    ``trace(A)/N`` to round-off the spectrum is flat, ``R`` would be
    singular, and the update is flagged ``degenerate`` (inversions then run
    on A unmodified).
    """
    a = as_hermitian(a)
    n = a.shape[0]
    if n < 3:
        raise DimensionError("SR-1R needs N >= 3")
    top = power_iterate(a, tau=tau, seed=seed)
    lam0 = top.eigenvalue
    tr = float(np.trace(a).real)
    beta = pia_beta(tr, lam0, n)
    degenerate = abs(lam0 - tr / n) <= 1e-12 * abs(lam0)
    beta = min(beta, 1.0)
    alpha = np.sqrt(max(0.0, 1.0 - beta * beta))
    bottom = smallest_eigvec(a, tau=tau, seed=seed)
    return _rank1_from_directions(lam0, alpha, beta, top.eigenvector, bottom.eigenvector,
                                  "pia", degenerate)


# -- end-to-end inversions ----------------------------------------------------


class _Candidate:
    """One PIA pipeline instance: R, ω, and a live Schulz iterator."""

    def __init__(self, a, update):
        self.update = update
        self.r = apply_rank1(a, update) if update.xi else a
        self.omega = gershgorin_omega(self.r)
        self.steps = schulz_steps(self.r, self.omega)
        self.trace = []
        self.x = None

    def advance(self):
        _, self.x, _, res = next(self.steps)
        self.trace.append(res)
        return res

    def recovered(self):
        if self.update.xi == 0.0:
            return self.x
        return sherman_morrison(self.x, self.update)


def _effective(update):
    if update.degenerate:
        return RankOneUpdate(0.0, update.b, update.alpha, update.beta, update.source, True)
    return update


def _report(a, cand, method, a_trace=None, **details):
    inv = cand.recovered()
    details.update(update=cand.update, xi=cand.update.xi, alpha=cand.update.alpha, beta=cand.update.beta,
                   degenerate=cand.update.degenerate)
    if a_trace is not None:
        details["a_residual_trace"] = np.array(a_trace)
    return InversionReport(
        inverse=inv,
        residual_trace=np.array(cand.trace),
        iterations=len(cand.trace) - 1,
        omega=cand.omega,
        method=method,
        final_residual=frobenius_residual(a, inv),
        details=details,
    )


def _run_to_stop(a, cand, config, a_trace=None):
    fixed = config.fixed_iterations
    budget = int(fixed) if fixed is not None else int(config.max_iterations)
    tol = None if fixed is not None else config.residual_tolerance
    while True:
        res = cand.advance()
        if a_trace is not None:
            a_trace.append(frobenius_residual(a, cand.recovered()))
        i = len(cand.trace) - 1
        if i >= budget or (tol is not None and res <= tol):
            return


def invert_with_update(a, update, config=None, method="sr1r", trace_against_a=False):
    """Schulz on ``R = A - ξ b bᴴ`` followed by Sherman-Morrison recovery."""
    config = config or SchulzConfig()
    a = as_hermitian(a)
    cand = _Candidate(a, _effective(update))
    a_trace = [] if trace_against_a else None
    _run_to_stop(a, cand, config, a_trace)
    return _report(a, cand, method, a_trace)


def pia_invert(a, tau=DEFAULT_TAU, seed=0, config=None, trace_against_a=False):
    """Power-iteration-assisted SR-1R inversion of a Hermitian PD matrix.

    ``residual_trace`` follows the Schulz loop on R; ``final_residual`` is
    ``||I - A Â⁻¹||_F``. With ``trace_against_a`` the per-iteration residual
    of the recovered inverse against A is stored in
    ``details["a_residual_trace"]``.
    """
    a = as_hermitian(a)
    update = sr1r_params_pia(a, tau=tau, seed=seed)
    return invert_with_update(a, update, config, "pia", trace_against_a)


def epia_invert(a, candidates=DEFAULT_CANDIDATES, tau=DEFAULT_TAU, seed=0, config=None,
                trace_against_a=False):
    """Enhanced PIA: ``candidates`` independent PIA runs (seeds ``seed + l``).

    All candidates iterate in lockstep. The pick is the candidate whose
    recovered inverse has the smallest ``||I - A Â⁻¹_l||_F`` at the first
    common iteration where the budget is spent (fixed mode) or some candidate
    reaches the tolerance; ties go to the lowest index. The winner then keeps
    iterating until it meets the stopping rule itself.
    """
    if candidates < 1:
        raise ValueError("need at least one candidate")
    config = config or SchulzConfig()
    a = as_hermitian(a)
    live = {}
    for l in range(candidates):
        try:
            live[l] = _Candidate(a, _effective(sr1r_params_pia(a, tau=tau, seed=seed + l)))
        except NumericalError:
            continue

    fixed = config.fixed_iterations
    budget = int(fixed) if fixed is not None else int(config.max_iterations)
    tol = None if fixed is not None else config.residual_tolerance
    a_traces = {l: [] for l in live} if trace_against_a else None
    i = -1
    while live:
        i += 1
        done = False
        for l in list(live):
            try:
                res = live[l].advance()
            except NumericalError:
                del live[l]
                continue
            if a_traces is not None:
                a_traces[l].append(frobenius_residual(a, live[l].recovered()))
            if tol is not None and res <= tol:
                done = True
        if done or i >= budget:
            break
    if not live:
        raise CandidatesFailedError("every e-PIA candidate failed")

    scores = {}
    for l, cand in live.items():
        try:
            scores[l] = frobenius_residual(a, cand.recovered())
        except NumericalError:
            continue
    if not scores:
        raise CandidatesFailedError("every e-PIA candidate failed")
    best = min(scores, key=lambda l: (scores[l], l))
    cand = live[best]
    a_trace = a_traces[best] if a_traces is not None else None
    res = cand.trace[-1]
    if not (i >= budget or (tol is not None and res <= tol)):
        _run_to_stop(a, cand, config, a_trace)
    return _report(a, cand, "e-pia", a_trace, selected=best,
                   selection_iteration=i, candidate_residuals=dict(sorted(scores.items())))


# -- RZF and rank-K -----------------------------------------------------------


def rzf_matrix(a, snr):
    if not snr > 0:
        raise ValueError("snr must be positive")
    a = as_hermitian(a)
    r = a.copy()
    r[np.diag_indices_from(r)] += 1.0 / snr
    return r


def _rankk_split(spec, k1, k2):
    n = spec.n
    if k1 < 0 or k2 < 0 or not 1 <= k1 + k2 < n:
        raise DimensionError(f"need k1, k2 >= 0 and 1 <= k1 + k2 < N, got {k1}, {k2}, N={n}")
    lam = np.asarray(spec.eigenvalues, dtype=float)
    idx = list(range(k1)) + list(range(n - k2, n))
    lam_bar = lam[k1:n - k2].mean()
    return idx, lam, lam_bar


def rankk_params_exact(spec, k1, k2):
    """Move the top ``k1`` and bottom ``k2`` eigenvalues onto the mean of the rest.

    ``B`` holds the matching eigenvectors and ``xi = λ_k - λ̄`` so that
    ``A - B diag(xi) Bᴴ`` has eigenvalue λ̄ in each moved direction.
    """
    idx, lam, lam_bar = _rankk_split(spec, k1, k2)
    b = np.array(spec.eigenvectors[:, idx])
    return RankKUpdate(b, lam[idx] - lam_bar, True, "exact")


def rankk_perturbed(spec, k1, k2, noise_sigma, seed=0):
    """Exact rank-K update plus Gaussian noise on ``B`` (complex, std
    ``noise_sigma``) and on ``xi`` (real, same std). Columns of ``B`` are not
    re-orthonormalized."""
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    exact = rankk_params_exact(spec, k1, k2)
    if noise_sigma == 0:
        return RankKUpdate(exact.B.copy(), exact.xi.copy(), True, "perturbed")
    gen = _rng.stream(seed, _rng.RANKK_NOISE)
    b = exact.B + noise_sigma * _rng.complex_normal(gen, exact.B.shape)
    xi = exact.xi + noise_sigma * _rng.standard_normal(gen, exact.k)
    return RankKUpdate(b, xi, False, "perturbed")


def apply_rankk(a, u):
    a = as_matrix(a)
    return hermitize(a - (u.B * u.xi) @ u.B.conj().T)


def woodbury(r_inv, u, cond_limit=1e13):
    """``A⁻¹`` from ``R⁻¹`` where ``A = R + B diag(xi) Bᴴ``.

    Directions with ``xi == 0`` contribute nothing and are dropped first.
    """
    r_inv = as_matrix(r_inv)
    keep = np.asarray(u.xi) != 0.0
    if not keep.any():
        return r_inv.copy()
    b = u.B[:, keep]
    xi = np.asarray(u.xi)[keep]
    rb = r_inv @ b
    br = b.conj().T @ r_inv
    cap = np.diag(1.0 / xi) + b.conj().T @ rb
    if not np.all(np.isfinite(cap)) or np.linalg.cond(cap) > cond_limit:
        raise SingularError("Woodbury capacitance matrix is singular")
    return r_inv - rb @ np.linalg.solve(cap, br)
