"""Selects between numba-compiled kernels and the pure-numpy path.

Set ``RELENT_DISABLE_NUMBA=1`` to force the numpy path even when numba
is importable.
"""

import os

_DISABLED = os.environ.get("RELENT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAS_NUMBA = False

NUMBA_ENABLED = HAS_NUMBA and not _DISABLED


def njit(func):
    """Compile ``func`` with numba in nopython mode, or return it unchanged."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
