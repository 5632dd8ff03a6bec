"""Select between numba-compiled kernels and the pure-numpy path.

Set ``EDGESTATES_NO_NUMBA=1`` in the environment (before import) to force the
numpy/scipy fallback.  The fallback is also used when numba is not importable.
"""

import os

_FLAG = os.environ.get("EDGESTATES_NO_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by EDGESTATES_NO_NUMBA")
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:
    _numba_njit = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` with ``cache=True, nogil=True``; identity when numba is off."""
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    return _numba_njit(*args, **kwargs)


def backend_name():
    return "numba" if HAVE_NUMBA else "numpy"
