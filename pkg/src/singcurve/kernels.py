"""Kernel backend selection.

The compiled extension is used when it was built and ``SINGCURVE_PURE_PYTHON``
is unset; otherwise the pure-Python reference kernels are used.
"""

import os

from . import _pykernels

BACKEND = "python"
conv_trunc = _pykernels.conv_trunc

if not os.environ.get("SINGCURVE_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        _ckernels = None
    else:
        conv_trunc = _ckernels.conv_trunc
        BACKEND = "cython"


def backends():
    """Map backend name -> kernel namespace for every backend available."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels as compiled
    except ImportError:
        return found
    found["cython"] = compiled
    return found
