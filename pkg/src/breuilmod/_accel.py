"""Kernel backend selection.

Prefers the compiled extension (breuilmod._kernels, built from _kernels.pyx)
and falls back to the numpy implementations.  Set BREUILMOD_PURE=1 to force
the fallback, e.g. for benchmarking one backend against the other.
"""

import os

if os.environ.get("BREUILMOD_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
rref_mod = _impl.rref_mod
poly_conv = _impl.poly_conv
poly_matmul = _impl.poly_matmul
