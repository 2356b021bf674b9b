"""Kernel backend selection.

The Cython extension is used when it was built; otherwise (or when the
environment variable ``MAXWELLFK_PURE_PYTHON`` is set to a non-empty value
other than ``0``) the numpy fallback is loaded. ``BACKEND`` names the active
implementation.
"""
from __future__ import annotations

import os

from . import _kernels_py as python_backend

if os.environ.get("MAXWELLFK_PURE_PYTHON", "") not in ("", "0"):
    _impl = python_backend
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = python_backend

BACKEND: str = _impl.BACKEND
p1_triplets = _impl.p1_triplets
constrained_lambda_grid = _impl.constrained_lambda_grid


def compiled_backend():
    """The compiled module, or ``None`` if it is not importable."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
