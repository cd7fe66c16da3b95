"""Kernel backend selection.

The hot enumeration kernels exist twice: a numba @njit implementation and a
vectorized pure-numpy fallback.  The env var STEPUP_BACKEND picks one:

    STEPUP_BACKEND=numba    force numba (ImportError if unavailable)
    STEPUP_BACKEND=numpy    force the numpy fallback
    unset / "auto"          numba when importable, else numpy

Selection happens once at import; `active_backend()` reports the choice.
"""

from __future__ import annotations

import os

_ENV_VAR = "STEPUP_BACKEND"


def _select() -> str:
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        import numba  # noqa: F401  -- fail loudly if forced but missing

        return "numba"
    if choice == "auto":
        try:
            import numba  # noqa: F401

            return "numba"
        except ImportError:
            return "numpy"
    raise ValueError(f"{_ENV_VAR} must be 'numba', 'numpy' or 'auto', got {choice!r}")


_ACTIVE = _select()


def active_backend() -> str:
    return _ACTIVE


def set_workers(n: int | None) -> int:
    """Set the worker count for partitioned kernels (numba thread pool).

    Returns the effective count.  The numpy backend is single-threaded apart
    from BLAS; the call is then a no-op.
    """
    if n is not None and n < 1:
        raise ValueError("workers must be >= 1")
    if _ACTIVE != "numba":
        return 1
    import numba

    if n is None:
        n = numba.config.NUMBA_DEFAULT_NUM_THREADS
    n = min(n, numba.config.NUMBA_NUM_THREADS)
    numba.set_num_threads(n)
    return n
