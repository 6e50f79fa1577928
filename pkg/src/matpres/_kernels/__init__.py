"""Kernel selection.

The compiled ``_fast`` extension is used when it was built; otherwise the
pure-Python ``_pure`` module.  Set ``MATPRES_PURE=1`` to force the fallback.
"""

import os

from . import _pure

BACKEND = "python"

if os.environ.get("MATPRES_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _fast as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pure
else:
    _impl = _pure

xgcd = _impl.xgcd
echelon_insert = _impl.echelon_insert
echelon_residual = _impl.echelon_residual
hnf_reduce = _impl.hnf_reduce
find_subword = _impl.find_subword
first_redex = _impl.first_redex

__all__ = [
    "BACKEND",
    "xgcd",
    "echelon_insert",
    "echelon_residual",
    "hnf_reduce",
    "find_subword",
    "first_redex",
]
