"""Kernel backend selection.

The compiled extension is preferred when present; the NumPy fallback keeps
the package fully functional without a build step.  Set CLUSTERCOV_BACKEND
to "python" or "compiled" to force a choice (the default "auto" tries the
extension first).
"""

from __future__ import annotations

import os

_requested = os.environ.get("CLUSTERCOV_BACKEND", "auto").lower()
if _requested not in ("auto", "compiled", "python"):
    raise ValueError(
        f"CLUSTERCOV_BACKEND must be auto, compiled or python, got {_requested!r}"
    )

if _requested == "python":
    from . import _py as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "CLUSTERCOV_BACKEND=compiled but the extension is not built; "
                "run `python setup.py build_ext --inplace` or pip install ."
            ) from None
        from . import _py as _impl

        BACKEND = "python"

radial_sums = _impl.radial_sums
inter_sums = _impl.inter_sums

__all__ = ["BACKEND", "inter_sums", "radial_sums"]
