"""Exception hierarchy. Numerical failures map to CLI exit code 3."""


class Sr1rError(Exception):
    """Base class for all package errors."""


class DimensionError(Sr1rError, ValueError):
    pass


class ValidationError(Sr1rError, ValueError):
    """Input fails a structural check (non-Hermitian, non-finite, bad config)."""


class NumericalError(Sr1rError, ArithmeticError):
    """Base for failures of a numerical procedure on valid input."""


class NonConvergenceError(NumericalError):
    pass


class SingularError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass


class DegenerateSpectrumError(NumericalError):
    pass


class ZeroVectorError(NumericalError):
    pass


class CandidatesFailedError(NumericalError):
    pass
