"""Kernel selection: the compiled extension when importable, NumPy otherwise.

Set ``VORTEXLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("VORTEXLAB_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
hermite5 = _impl.hermite5
riccati_angle = _impl.riccati_angle
cocycle_rk4 = _impl.cocycle_rk4
lagrange_weights = _kernels_py.lagrange_weights
