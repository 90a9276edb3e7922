"""Optional numba acceleration.

Set ``SKEINCOUNT_DISABLE_NUMBA=1`` to force the pure numpy/python kernels.
"""

import os

_DISABLED = os.environ.get("SKEINCOUNT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:  # pragma: no cover - depends on environment
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _njit = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def deco(fn):
        return fn

    return deco


def backend() -> str:
    return "numba" if HAVE_NUMBA else "python"
