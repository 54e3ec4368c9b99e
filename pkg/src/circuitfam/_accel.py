"""Numba switch shared by the hot kernels.

Set ``CIRCUITFAM_DISABLE_NUMBA=1`` to force the pure-numpy code paths (useful
for debugging and for platforms without numba). Both paths are always
importable so they can be benchmarked against each other.
"""
import os

_FLAG = os.environ.get("CIRCUITFAM_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrapper(func):
            return func

        return wrapper


USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
