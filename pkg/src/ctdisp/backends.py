"""Kernel backend selection.

The numba path is used when importable unless ``CTDISP_NO_NUMBA`` is set
to 1/true/yes; :func:`set_backend` overrides at runtime (used by the
benchmark and the cross-checking tests).
"""

from __future__ import annotations

import os

from . import _kernels_numpy

__all__ = ["active_backend", "set_backend", "kernels", "numba_available"]

_DISABLED_BY_ENV = os.environ.get("CTDISP_NO_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

try:  # defer heavy jit compilation until a kernel is first called
    if _DISABLED_BY_ENV:
        raise ImportError("numba disabled via CTDISP_NO_NUMBA")
    from . import _kernels_numba

    _HAS_NUMBA = True
except ImportError:
    _kernels_numba = None
    _HAS_NUMBA = False

_active = "numba" if _HAS_NUMBA else "numpy"


def numba_available() -> bool:
    return _HAS_NUMBA


def active_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Select 'numba', 'numpy' or 'auto'; returns the backend now active."""
    global _active
    if name == "auto":
        _active = "numba" if _HAS_NUMBA else "numpy"
    elif name == "numpy":
        _active = "numpy"
    elif name == "numba":
        if not _HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is not available")
        _active = "numba"
    else:
        raise ValueError(f"unknown backend {name!r}")
    return _active


def kernels():
    return _kernels_numba if _active == "numba" else _kernels_numpy
