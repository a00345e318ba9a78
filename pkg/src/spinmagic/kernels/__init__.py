"""Backend dispatch for the hot numeric kernels.

Two interchangeable implementations exist: a numba-JIT one and a pure-numpy
one.  Selection happens once at import time through the environment variable
``SPINMAGIC_BACKEND`` ("numba" or "numpy").  Unset, numba is preferred and
numpy is the silent fallback when numba is unavailable.
"""

import os

_requested = os.environ.get("SPINMAGIC_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(
        f"SPINMAGIC_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import numpy_backend as _impl

    BACKEND = "numpy"
else:
    try:
        from . import numba_backend as _impl

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import numpy_backend as _impl

        BACKEND = "numpy"

pauli_moment_sums = _impl.pauli_moment_sums
syk_sector_matrix = _impl.syk_sector_matrix
