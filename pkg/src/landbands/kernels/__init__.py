"""Backend selection for the F2 reduction kernel.

The compiled Cython kernel is used when its extension module imported
successfully; otherwise (or when the ``LANDBANDS_PURE`` environment variable
is set to a non-empty value) the pure-Python fallback takes over.  Both
implement the same ``reduce_columns`` contract and yield identical pairings.

``BACKEND`` records which one is active: ``"compiled"`` or ``"python"``.
"""

import os

from . import _reduction_py

try:
    from . import _reduction as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("LANDBANDS_PURE"):
    _impl = _compiled
    BACKEND = "compiled"
else:
    _impl = _reduction_py
    BACKEND = "python"

reduce_columns = _impl.reduce_columns

__all__ = ["reduce_columns", "BACKEND", "available_backends"]


def available_backends():
    """Return a dict mapping backend name to its ``reduce_columns`` callable."""
    out = {"python": _reduction_py.reduce_columns}
    if _compiled is not None:
        out["compiled"] = _compiled.reduce_columns
    return out
