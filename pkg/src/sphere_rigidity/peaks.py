"""Peak families and intersections of maximum sets."""

from __future__ import annotations

from collections.abc import Sequence

from .lattice import GridSpec, SpaceMismatchError, SpaceModel, SphereError, SphereFn, enumerate_grid_sphere
from .setcalc import PointSet, max_set

__all__ = ["peak_family", "peak_family_included", "intersect_max_sets"]


def peak_family(space: SpaceModel, t: str, grid: GridSpec) -> tuple[SphereFn, ...]:
    """Grid sphere functions equal to 1 at ``t``; ``(m+1)**(n-1)`` of them."""
    i = space.index(t)
    return tuple(f for f in enumerate_grid_sphere(space, grid) if f.values[i] == 1)


def peak_family_included(space: SpaceModel, t0: str, t1: str, grid: GridSpec) -> bool:
    """Whether every grid function peaking at ``t0`` also peaks at ``t1``."""
    i1 = space.index(t1)
    return all(f.values[i1] == 1 for f in peak_family(space, t0, grid))


def intersect_max_sets(fns: Sequence[SphereFn]) -> PointSet:
    if not fns:
        raise SphereError("cannot intersect an empty family")
    space = fns[0].space
    common = set(space.points)
    for f in fns:
        if f.space != space:
            raise SpaceMismatchError()
        common.intersection_update(max_set(f).members)
    return PointSet(space, frozenset(common))
