"""Backend selection for the grid kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded.  Set ``NIMTRANSPORT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("NIMTRANSPORT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "compiled"

potential_table = _impl.potential_table
potential_grid_sum = _impl.potential_grid_sum
xor_moment_sum = _impl.xor_moment_sum
carry_free_count = _impl.carry_free_count

MAX_TABLE_LEVEL = _impl.MAX_TABLE_LEVEL
MAX_SUM_LEVEL = _impl.MAX_SUM_LEVEL
MAX_XOR_LEVEL = _impl.MAX_XOR_LEVEL

__all__ = [
    "BACKEND",
    "potential_table",
    "potential_grid_sum",
    "xor_moment_sum",
    "carry_free_count",
]
