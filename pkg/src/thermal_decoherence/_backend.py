"""Kernel backend selection.

Hot loops are written twice: a numba ``@njit`` version and a vectorised numpy
version.  ``THERMAL_DECOHERENCE_BACKEND=numpy`` forces the numpy path; the
default is numba whenever it imports.
"""

import os

BACKEND_ENV = "THERMAL_DECOHERENCE_BACKEND"
THREADS_ENV = "THERMAL_DECOHERENCE_THREADS"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def njit(func):
    """Compile ``func`` with numba when available, otherwise return it unchanged."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True, fastmath=False)(func)


def selected_backend() -> str:
    choice = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numba" and not HAVE_NUMBA:
        return "numpy"
    return choice


def max_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n
