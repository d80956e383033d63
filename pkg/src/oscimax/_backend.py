"""Select between numba-compiled kernels and the pure numpy fallback.

Set ``OSCIMAX_BACKEND=numpy`` (or ``OSCIMAX_DISABLE_NUMBA=1``) before import
to force the fallback path.
"""
import os

_requested = os.environ.get("OSCIMAX_BACKEND", "").strip().lower()
_disabled = os.environ.get("OSCIMAX_DISABLE_NUMBA", "").strip() not in ("", "0")

USE_NUMBA = not (_disabled or _requested == "numpy")

if USE_NUMBA:
    try:
        import numba
        from numba import njit, prange

        if "NUMBA_THREADING_LAYER" not in os.environ:
            numba.config.THREADING_LAYER = "workqueue"
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    numba = None
    prange = range

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


BACKEND = "numba" if USE_NUMBA else "numpy"


def set_threads(n):
    """Set the worker count for parallel kernels; a no-op on the numpy path."""
    if n is None:
        return
    n = int(n)
    if n < 1:
        raise ValueError("thread count must be >= 1")
    if USE_NUMBA:
        n = min(n, numba.config.NUMBA_NUM_THREADS)
        numba.set_num_threads(n)
