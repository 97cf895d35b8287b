"""Kernel backend selection.

The compiled extension is used when it was built; set ``IRSASSOC_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _kernels_py

if os.environ.get("IRSASSOC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
field_table = _impl.field_table
deferred_acceptance = _impl.deferred_acceptance
