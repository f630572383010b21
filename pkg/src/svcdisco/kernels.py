"""Scan kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_kernels_py`` module is. Set ``SVCDISCO_PURE_PYTHON=1`` to force
the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("SVCDISCO_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"
scan = _impl.scan
spin = _impl.spin


def backends():
    """Every importable backend, keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
