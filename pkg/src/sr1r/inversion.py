"""One entry point for every inversion route, keyed by a method name."""
import numpy as np

from .errors import ValidationError
from .matrix import as_hermitian, evd_hermitian, frobenius_residual
from .power import DEFAULT_TAU
from .preconditioners import PreconditionerKind, preconditioned_invert
from .regularizers import (
    DEFAULT_CANDIDATES,
    epia_invert,
    invert_with_update,
    pia_invert,
    sr1r_params_exact,
)
from .schulz import InversionReport, SchulzConfig, schulz_invert

METHODS = ("oracle", "schulz", "pia", "epia", "sr1r-exact", "jacobi", "gs", "ssor")


def invert(a, method, config=None, tau=DEFAULT_TAU, candidates=DEFAULT_CANDIDATES, seed=0,
           trace_against_a=False):
    """Invert a Hermitian PD matrix with the named method."""
    if method not in METHODS:
        raise ValidationError(f"unknown inversion method {method!r}; choose from {METHODS}")
    a = as_hermitian(a)
    config = config or SchulzConfig()
    if method == "oracle":
        inv = evd_hermitian(a).inverse()
        return InversionReport(inv, np.zeros(1), 0, float("nan"), "oracle",
                               frobenius_residual(a, inv))
    if method == "schulz":
        rep = schulz_invert(a, config=config)
        rep.final_residual = frobenius_residual(a, rep.inverse)
        return rep
    if method == "pia":
        return pia_invert(a, tau=tau, seed=seed, config=config, trace_against_a=trace_against_a)
    if method == "epia":
        return epia_invert(a, candidates=candidates, tau=tau, seed=seed, config=config,
                           trace_against_a=trace_against_a)
    if method == "sr1r-exact":
        update = sr1r_params_exact(evd_hermitian(a))
        return invert_with_update(a, update, config, "sr1r-exact", trace_against_a)
    return preconditioned_invert(a, PreconditionerKind(method), config)
