"""Thread-count control for deterministic numerics.

The solvers in :mod:`bimod.spectral` and :mod:`bimod.cluster` must produce
bit-identical results regardless of how many cores the host machine has.
BLAS libraries change their reduction order with the thread count, so every
reduction that feeds a published number runs with BLAS pinned to a single
thread: the effective reduction tree is the sequential one.  Everything
outside those sections respects the ``BIMOD_THREADS`` cap.
"""

import os
import sys

from threadpoolctl import threadpool_limits

THREADS_ENV = "BIMOD_THREADS"

# Keeps the process-wide limiter alive once applied.
_global_cap = None


def single_threaded_blas():
    """Context manager pinning BLAS/LAPACK to one thread."""
    return threadpool_limits(limits=1)


def apply_thread_cap():
    """Apply the BIMOD_THREADS cap to BLAS pools for the rest of the process.

    Invalid values are reported on stderr and ignored.
    """
    global _global_cap
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return None
    try:
        cap = int(raw)
        if cap < 1:
            raise ValueError
    except ValueError:
        print(f"warning: ignoring invalid {THREADS_ENV}={raw!r} (want a positive integer)",
              file=sys.stderr)
        return None
    _global_cap = threadpool_limits(limits=cap)
    return cap
