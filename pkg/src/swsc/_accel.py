"""Optional numba acceleration.

Set ``SWSC_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is read
once at import time.
"""

import os

_disabled = os.environ.get("SWSC_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError("disabled by SWSC_DISABLE_NUMBA")
    import numba as _nb
except ImportError:
    _nb = None

NUMBA_ENABLED = _nb is not None


def njit(*args, **kwargs):
    """``numba.njit`` with caching, or a no-op decorator when numba is off."""
    if _nb is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return _nb.njit(*args, **kwargs)


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
