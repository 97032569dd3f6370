"""Backend selection for the batch kernels.

The compiled extension is used when importable; setting the environment
variable ``SUN_EULER_PURE_PYTHON=1`` forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _fallback

if os.environ.get("SUN_EULER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _ext as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

apply_program = _impl.apply_program
density_terms = _impl.density_terms

__all__ = ["BACKEND", "apply_program", "density_terms"]
