"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting
``SCROLLSYS_PURE_PYTHON=1`` forces the reference implementation.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
condition_matrix = _kernels_py.condition_matrix
rank_mod_p = _kernels_py.rank_mod_p

if os.environ.get("SCROLLSYS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        BACKEND = "compiled"
        condition_matrix = _kernels.condition_matrix
        rank_mod_p = _kernels.rank_mod_p
