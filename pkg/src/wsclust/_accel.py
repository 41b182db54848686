"""Numba acceleration toggle.

Hot kernels ship in two variants: numba-compiled loops and vectorized
numpy. Setting WSCLUST_NUMBA=0 (or running without numba installed)
selects the numpy path at import time. Both variants stay importable so
they can be benchmarked against each other in one process.
"""

import os


def _env_wants_numba() -> bool:
    value = os.environ.get("WSCLUST_NUMBA", "1").strip().lower()
    return value not in {"0", "false", "off", "no"}


USING_NUMBA = False
if _env_wants_numba():
    try:
        from numba import njit

        USING_NUMBA = True
    except ImportError:
        pass

if not USING_NUMBA:

    def njit(*args, **kwargs):
        """Signature-compatible no-op stand-in for numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
