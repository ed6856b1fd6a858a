"""Numba acceleration toggle.

Hot numeric kernels in :mod:`sonolens.kernels` are compiled with numba when
available. Set ``SONOLENS_NO_NUMBA=1`` to force the pure-numpy fallback path
(useful for debugging and for the benchmark in ``benchmarks/``).
"""

import os

_DISABLE = os.environ.get("SONOLENS_NO_NUMBA", "").lower() in ("1", "true", "yes")

HAVE_NUMBA = False
if not _DISABLE:
    try:
        from numba import njit  # noqa: F401
        HAVE_NUMBA = True
    except ImportError:
        pass

if not HAVE_NUMBA:
    def njit(*args, **kwargs):
        """No-op stand-in for numba.njit."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func
        return wrap
