"""Backend selection for the hot factorization kernel.

The environment variable KFK_BACKEND picks the implementation:

    KFK_BACKEND=numba   jitted kernel (default when numba imports cleanly)
    KFK_BACKEND=numpy   pure-numpy fallback, no compilation step

Both backends produce bit-identical arrays; benchmarks/bench_backends.py
compares their throughput.
"""

import os

_requested = os.environ.get("KFK_BACKEND", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        f"KFK_BACKEND={_requested!r} not recognized; use 'numba' or 'numpy'"
    )

if _requested == "numpy":
    from ._kernels_numpy import factor_segment

    BACKEND = "numpy"
elif _requested == "numba":
    from ._kernels_numba import factor_segment

    BACKEND = "numba"
else:
    try:
        from ._kernels_numba import factor_segment

        BACKEND = "numba"
    except ImportError:
        from ._kernels_numpy import factor_segment

        BACKEND = "numpy"

__all__ = ["factor_segment", "BACKEND"]
