"""Kernel backend selection.

The compiled extension is preferred; set ``POLYCONS_PURE_PYTHON=1`` to force
the numpy fallback (useful for debugging and for the backend benchmark).
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if not os.environ.get("POLYCONS_PURE_PYTHON"):
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

minmax_grid = kernels.minmax_grid
canonical_codes = kernels.canonical_codes
propagate = kernels.propagate

__all__ = ["BACKEND", "kernels", "minmax_grid", "canonical_codes", "propagate"]
