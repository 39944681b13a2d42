"""Hot loops behind a backend switch.

The compiled ``_ckernels`` module is used when it imports; otherwise the
pure-Python ``_pykernels`` run. ``SPHERE_RIGIDITY_PURE=1`` forces the
fallback. Inputs whose integer coding would overflow int64 are routed to the
Python backend regardless.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from collections.abc import Sequence

from . import _pykernels

try:
    if os.environ.get("SPHERE_RIGIDITY_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _ckernels as _fast
except ImportError:
    _fast = None

BACKEND = _fast.BACKEND if _fast is not None else _pykernels.BACKEND

_INT64_SAFE = 2**62


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _fast is not None else [])


def _pick(backend: str | None, magnitude: int):
    if backend == "python" or _fast is None or magnitude >= _INT64_SAFE:
        if backend == "cython" and _fast is None:
            raise RuntimeError("compiled kernels are not built")
        return _pykernels
    return _fast


def encode(rows: Sequence[Sequence[Fraction]]) -> tuple[list[tuple[int, ...]], int]:
    """Scale rational rows to integers over their common denominator."""
    denom = 1
    for row in rows:
        for v in row:
            denom = math.lcm(denom, v.denominator)
    coded = [tuple(v.numerator * (denom // v.denominator) for v in row) for row in rows]
    return coded, denom


def _magnitude(rows: Sequence[Sequence[int]]) -> int:
    return max((abs(x) for row in rows for x in row), default=0) * 2


def distance_matrix(rows: Sequence[Sequence[int]], backend: str | None = None) -> list[list[int]]:
    if not rows:
        return []
    return _pick(backend, _magnitude(rows)).distance_matrix(rows)


def first_distortion(
    da: Sequence[Sequence[int]], db: Sequence[Sequence[int]], backend: str | None = None
) -> tuple[int, int] | None:
    if len(da) != len(db):
        raise ValueError("distance matrices differ in size")
    if not da:
        return None
    return _pick(backend, max(_magnitude(da), _magnitude(db))).first_distortion(da, db)


def isometry_search(
    dist: Sequence[Sequence[int]], first: int = -1, backend: str | None = None
) -> list[tuple[int, ...]]:
    return _pick(backend, _magnitude(dist)).isometry_search(dist, first)
