"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
``RPT_PURE_PYTHON`` environment variable is set to a non-empty value other
than ``0``, the numpy fallback is used. Both expose ``count_hits`` and
``cosine_rows`` with identical results.
"""

from __future__ import annotations

import os

from rpt import _pykernels

python_backend = _pykernels

try:
    from rpt import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if os.environ.get("RPT_PURE_PYTHON", "") not in ("", "0") or compiled_backend is None:
    backend = _pykernels
else:
    backend = compiled_backend

BACKEND = backend.BACKEND
count_hits = backend.count_hits
cosine_rows = backend.cosine_rows


def available_backends() -> dict:
    found = {"python": _pykernels}
    if compiled_backend is not None:
        found["cython"] = compiled_backend
    return found
