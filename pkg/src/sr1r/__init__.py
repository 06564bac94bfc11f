"""Symmetric rank-1 regularization for iterative inversion of ill-conditioned
Hermitian positive-definite matrices, with the MIMO precoding harness used to
exercise it."""
from ._accel import backend
from .analysis import convergence_factors, cost_report, placement_measure
from .channels import ChannelConfig, ChannelModel, generate
from .errors import (
    CandidatesFailedError,
    DegenerateSpectrumError,
    DimensionError,
    DivergenceError,
    NonConvergenceError,
    NumericalError,
    SingularError,
    Sr1rError,
    ValidationError,
    ZeroVectorError,
)
from .inversion import METHODS, invert
from .matrix import SpectralDecomposition, condition_number, evd_hermitian, gram
from .power import PowerIterationResult, power_iterate, smallest_eigvec
from .precoding import PrecoderConfig, QamConstellation, SerResult, ser_experiment
from .preconditioners import PreconditionerKind, preconditioned_invert
from .regularizers import (
    RankKUpdate,
    RankOneUpdate,
    epia_invert,
    pia_invert,
    rankk_params_exact,
    rankk_perturbed,
    rzf_matrix,
    sherman_morrison,
    sr1r_params_exact,
    sr1r_params_pia,
    woodbury,
)
from .schulz import InversionReport, SchulzConfig, schulz_invert

__version__ = "0.1.0"
