"""Kernel backend selection.

The numba backend is used when numba imports cleanly and the environment
variable ``IQPSHIFT_DISABLE_NUMBA`` is unset or ``0``. Otherwise the
pure-numpy versions are used. Both expose identical signatures.
"""

import os

from . import numpy_kernels

BACKEND = "numpy"
kernels = numpy_kernels

if os.environ.get("IQPSHIFT_DISABLE_NUMBA", "0") in ("", "0"):
    try:
        from . import numba_kernels
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        BACKEND = "numba"
        kernels = numba_kernels

__all__ = ["BACKEND", "kernels", "numpy_kernels"]
