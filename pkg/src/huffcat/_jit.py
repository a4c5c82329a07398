"""JIT switch for the numeric kernels.

Kernels are compiled with :func:`numba.njit` unless ``HUFFCAT_DISABLE_JIT`` is
set to a truthy value (or numba is not importable), in which case the very
same functions run as plain Python over numpy arrays.
"""

import os

_FLAG = os.environ.get("HUFFCAT_DISABLE_JIT", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

JIT_ENABLED = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(func):
    if not JIT_ENABLED:
        return func
    return numba.njit(cache=True, nogil=True)(func)
