"""Backend selection for the hot kernels.

The accelerated numba path is used when available.  Setting the environment
variable ``HELSONSPEC_DISABLE_NUMBA`` to 1/true/yes forces the pure-numpy
fallback; a missing numba installation falls back silently.
"""

import os

_flag = os.environ.get("HELSONSPEC_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag in {"1", "true", "yes", "on"}

if NUMBA_DISABLED:
    from . import _kernels_numpy as _impl

    HAS_NUMBA = False
else:
    try:
        from . import _kernels_numba as _impl

        HAS_NUMBA = True
    except ImportError:
        from . import _kernels_numpy as _impl

        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"

zeta1p_array = _impl.zeta1p_array
zeta_hankel_matrix = _impl.zeta_hankel_matrix
helson_entries = _impl.helson_entries
helson_matvec = _impl.helson_matvec
