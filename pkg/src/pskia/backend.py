"""Search-backend selection: compiled extension if present, numpy otherwise.

Set PSKIA_PURE=1 to force the numpy fallback (used by the benchmark and by
the backend-agreement tests).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("PSKIA_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

pair_search = _impl.pair_search
equal_pair_search = _impl.equal_pair_search
assignment_search = _impl.assignment_search
