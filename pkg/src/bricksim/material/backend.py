"""Kernel backend selection.

The compiled Cython kernel is preferred; the pure-numpy twin is used when
the extension is unavailable or when BRICKSIM_PURE=1 is set.  Both expose
an identical ``run_transient``.
"""
from __future__ import annotations

import os

from . import _transient_py

_FORCE_PURE = os.environ.get("BRICKSIM_PURE", "") not in ("", "0")

if not _FORCE_PURE:
    try:
        from . import _speedups as _kernel  # type: ignore[attr-defined]
    except ImportError:
        _kernel = _transient_py
else:
    _kernel = _transient_py


def backend_name() -> str:
    return _kernel.BACKEND_NAME


def get_kernel(name: str | None = None):
    """Return a kernel module by name ('compiled', 'pure-python' or None=auto)."""
    if name is None:
        return _kernel
    if name in ("pure", "pure-python"):
        return _transient_py
    if name == "compiled":
        from . import _speedups  # raises ImportError if not built
        return _speedups
    raise ValueError(f"unknown backend {name!r}")
