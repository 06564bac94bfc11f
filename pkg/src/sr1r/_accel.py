"""Backend switch for the numba-compiled kernels.

Set ``SR1R_DISABLE_NUMBA=1`` in the environment before import to force the
pure-numpy code paths. Useful on platforms without numba and for checking
that both backends agree.
"""
import os

_DISABLED = os.environ.get("SR1R_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
