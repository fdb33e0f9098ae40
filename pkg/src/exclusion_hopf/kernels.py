"""Kernel selection: compiled extension when importable, else pure Python.

Set ``EXCLUSION_HOPF_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCE_PURE = os.environ.get("EXCLUSION_HOPF_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    MulKernel = _pykernels.MulKernel
else:
    try:
        from ._kernels import MulKernel  # type: ignore[no-redef]
    except ImportError:  # extension not built
        MulKernel = _pykernels.MulKernel

PyMulKernel = _pykernels.MulKernel
COMPILED = bool(getattr(MulKernel, "compiled", False))

__all__ = ["MulKernel", "PyMulKernel", "COMPILED"]
