"""
Backend selection for the numeric kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback. Setting ``TEMPO_BELL_PURE=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels
from .history import kernel_arrays

_compiled = None
if not os.environ.get("TEMPO_BELL_PURE"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

_active = _compiled if _compiled is not None else _pykernels
BACKEND: str = _active.BACKEND


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def backend_module(name: str | None = None):
    if name is None:
        return _active
    if name == "python":
        return _pykernels
    if name == "cython" and _compiled is not None:
        return _compiled
    raise ValueError(f"kernel backend {name!r} is not available")


def kernel_for(scenario, backend: str | None = None):
    """Kernel object for ``scenario`` on the active (or named) backend."""
    return backend_module(backend).Kernel(*kernel_arrays(scenario))
