"""Kernel selection: compiled extension when available, pure Python otherwise.

Set CAUSAL_RNR_PURE=1 to force the pure-Python kernels.  The compiled
kernels handle at most 64 elements per relation; larger inputs fall back
transparently.
"""

from __future__ import annotations

import os

from causalrnr import _pykernels

if os.environ.get("CAUSAL_RNR_PURE"):
    _impl = _pykernels
else:
    try:
        from causalrnr import _fastkernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
_LIMIT = getattr(_impl, "MAX_BITS", None)


def closure_rows(rows: list[int]) -> list[int]:
    if _LIMIT is not None and len(rows) > _LIMIT:
        return _pykernels.closure_rows(rows)
    return _impl.closure_rows(rows)


def has_cycle_rows(rows: list[int]) -> bool:
    if _LIMIT is not None and len(rows) > _LIMIT:
        return _pykernels.has_cycle_rows(rows)
    return _impl.has_cycle_rows(rows)


def reduction_rows(closed: list[int]) -> list[int]:
    if _LIMIT is not None and len(closed) > _LIMIT:
        return _pykernels.reduction_rows(closed)
    return _impl.reduction_rows(closed)
