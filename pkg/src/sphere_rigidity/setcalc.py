"""Maximum sets, zero sets and unit-ball membership on the positive sphere."""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable, Iterator

from .lattice import (
    GridSpec,
    SpaceMismatchError,
    SpaceModel,
    SphereError,
    SphereFn,
    enumerate_grid_sphere,
    pointwise_product,
    sup_distance,
)

__all__ = [
    "PointSet",
    "max_set",
    "zero_set",
    "in_d_definition",
    "in_d_criterion",
    "d_subset_on_grid",
    "max_set_witness",
]


@dataclass(frozen=True)
class PointSet:
    space: SpaceModel
    members: frozenset[str]

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        stray = members - set(self.space.points)
        if stray:
            raise SphereError(f"points not in space: {sorted(stray)}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, space: SpaceModel, members: Iterable[str]) -> PointSet:
        return cls(space, frozenset(members))

    def ordered(self) -> tuple[str, ...]:
        """Members in the space's canonical order."""
        return tuple(p for p in self.space.points if p in self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ordered())

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, point: object) -> bool:
        return point in self.members

    def _other(self, other: PointSet) -> frozenset[str]:
        if other.space != self.space:
            raise SpaceMismatchError()
        return other.members

    def __and__(self, other: PointSet) -> PointSet:
        return PointSet(self.space, self.members & self._other(other))

    def __or__(self, other: PointSet) -> PointSet:
        return PointSet(self.space, self.members | self._other(other))

    def __sub__(self, other: PointSet) -> PointSet:
        return PointSet(self.space, self.members - self._other(other))

    def issubset(self, other: PointSet) -> bool:
        return self.members <= self._other(other)

    def __repr__(self) -> str:
        return "{" + ", ".join(self.ordered()) + "}"


def max_set(f: SphereFn) -> PointSet:
    return PointSet(f.space, frozenset(p for p, v in f.items() if v == 1))


def zero_set(f: SphereFn) -> PointSet:
    return PointSet(f.space, frozenset(p for p, v in f.items() if v == 0))


def in_d_definition(f: SphereFn, h: SphereFn) -> bool:
    """``h`` lies in the open unit ball around ``f``: ``||h - f|| < 1``."""
    return sup_distance(h, f) < 1


def in_d_criterion(f: SphereFn, h: SphereFn) -> bool:
    """Set-theoretic test for the same membership.

    ``h`` is within distance < 1 of ``f`` exactly when ``h`` never peaks
    where ``f`` vanishes and never vanishes where ``f`` peaks.
    """
    if f.space != h.space:
        raise SpaceMismatchError()
    for a, b in zip(f.values, h.values):
        if (b == 1 and a == 0) or (b == 0 and a == 1):
            return False
    return True


def d_subset_on_grid(f: SphereFn, g: SphereFn, grid: GridSpec) -> bool:
    """Whether every grid function in the ball around ``f`` is also in the ball around ``g``."""
    if f.space != g.space:
        raise SpaceMismatchError()
    return all(
        in_d_definition(g, h)
        for h in enumerate_grid_sphere(f.space, grid)
        if in_d_definition(f, h)
    )


def max_set_witness(f: SphereFn, g: SphereFn) -> SphereFn:
    """A function in the ball around ``f`` but not around ``g``.

    Requires a point where ``g`` peaks and ``f`` does not. The first such
    point ``y0`` (canonical order) gets zeroed out of ``f``; the result keeps
    the maximum set of ``f`` and vanishes at ``y0``.
    """
    if f.space != g.space:
        raise SpaceMismatchError()
    candidates = (max_set(g) - max_set(f)).ordered()
    if not candidates:
        raise SphereError("M(g) ⊆ M(f): no witness exists")
    y0 = candidates[0]
    mask = SphereFn(f.space, tuple(0 if p == y0 else 1 for p in f.space.points))
    return pointwise_product(mask, f)
