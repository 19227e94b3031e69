"""Numba acceleration toggle.

The hot kernels (tree growing, batch tree prediction, the SVR pair solver)
each exist twice: a numba ``@njit`` loop and a pure-numpy twin.  The numpy
path is used when numba is missing or when ``RSSIKIT_NO_NUMBA=1`` is set in
the environment.  ``benchmarks/bench_kernels.py`` times the two against each
other.
"""

import os


def _numba_wanted() -> bool:
    flag = os.environ.get("RSSIKIT_NO_NUMBA", "").strip().lower()
    if flag in ("1", "true", "yes", "on"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _numba_wanted()

if USING_NUMBA:
    from numba import njit
else:
    def njit(*args, **kwargs):
        # identity decorator; the numpy twins are dispatched instead, so the
        # decorated loops never run hot on this path
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap
