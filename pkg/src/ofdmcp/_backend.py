"""Select the compiled kernels when available, else the numpy fallback.

Set ``OFDMCP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if not os.environ.get("OFDMCP_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        kernels = _ckernels
        BACKEND = "cython"

direct_coefficients = kernels.direct_coefficients
window_sums = kernels.window_sums
