"""Backend selection for the compiled kernels.

Set ``HILLGREEN_DISABLE_NUMBA=1`` to force the pure-numpy implementations.
"""
import os

_FLAG = os.environ.get("HILLGREEN_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG in {"1", "true", "yes", "on"}

try:
    if DISABLED:
        raise ImportError("numba disabled by HILLGREEN_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn


BACKEND = "numba" if HAVE_NUMBA else "numpy"
