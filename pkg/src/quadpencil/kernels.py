"""Kernel dispatch: the compiled module when built, else the Python reference.

Set QUADPENCIL_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os

from quadpencil import _kernels_py

COMPILED = False
_impl = _kernels_py
if not os.environ.get("QUADPENCIL_PURE"):
    try:
        from quadpencil import _kernels as _impl  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        _impl = _kernels_py

zero_points = _impl.zero_points
isotropic_subspace = _impl.isotropic_subspace
int_point_search = _impl.int_point_search
projective_points = _kernels_py.projective_points
