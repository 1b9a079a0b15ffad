"""Backend switch for the hot kernels.

Set ``CHVATAL_IP_BACKEND=numpy`` to bypass numba entirely; every kernel then
runs as plain Python/numpy.  The default is ``numba`` when it imports.
"""
import os

BACKEND = os.environ.get("CHVATAL_IP_BACKEND", "numba").strip().lower()
if BACKEND not in ("numba", "numpy"):
    raise ImportError(f"CHVATAL_IP_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}")

if BACKEND == "numba":
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None
        BACKEND = "numpy"
else:
    numba = None

USE_NUMBA = BACKEND == "numba"


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` or the identity, depending on the backend."""
    if USE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
