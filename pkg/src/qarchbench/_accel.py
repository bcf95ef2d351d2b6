"""Select compiled kernels when available; QARCHBENCH_PURE_PYTHON=1 forces the fallback."""
import os

from . import _pykernels as fallback

if os.environ.get("QARCHBENCH_PURE_PYTHON", "") not in ("", "0"):
    kernels = fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = fallback
        BACKEND = "python"
