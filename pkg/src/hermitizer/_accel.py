"""Backend selection for the compiled kernels.

Set ``HERMITIZER_NUMBA=0`` before import to force the pure-numpy path.
When numba is missing the numpy path is used silently.
"""
import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False


def _flag_enabled(value):
    return value.strip().lower() not in ("0", "false", "no", "off", "")


USE_NUMBA = HAS_NUMBA and _flag_enabled(os.environ.get("HERMITIZER_NUMBA", "1"))

njit_kwargs = {
    "nogil": True,
    "cache": True,
}


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if not HAS_NUMBA:
        return func
    return numba.njit(**njit_kwargs)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
