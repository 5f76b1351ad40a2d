"""JIT switch for the hot kernels.

Set ``MOMENTSHARP_DISABLE_NUMBA=1`` to force the pure-numpy paths (also the
automatic fallback when numba cannot be imported).
"""

import os

_flag = os.environ.get("MOMENTSHARP_DISABLE_NUMBA", "").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    HAVE_NUMBA = False
    _njit = None


def jit(func):
    """Compile ``func`` with ``njit(cache=True)`` when numba is enabled."""
    if HAVE_NUMBA:
        return _njit(cache=True)(func)
    return func


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
