"""Picks the grid-kernel implementation at import time.

The compiled extension is used when it imports; setting
``TORSIONLAB_PURE_PYTHON=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

from . import _fallback

fallback = _fallback

compiled = None
if os.environ.get("TORSIONLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled = None

kernels = compiled if compiled is not None else fallback
name = "compiled" if compiled is not None else "python"


def available() -> dict:
    """Name -> kernel module for every backend that can be imported."""
    out = {"python": fallback}
    if compiled is not None:
        out["compiled"] = compiled
    return out
