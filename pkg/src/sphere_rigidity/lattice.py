"""Finite spaces, exact-rational positive sphere functions and the sup metric.

A :class:`SpaceModel` is an ordered list of point labels. A :class:`SphereFn`
assigns every point a rational in ``[0, 1]`` and reaches ``1`` somewhere.
All arithmetic goes through :class:`fractions.Fraction`, so nothing is ever
rounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from collections.abc import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "SphereError",
    "SpaceMismatchError",
    "NotOnSphereError",
    "SpaceModel",
    "SphereFn",
    "GridSpec",
    "to_fraction",
    "format_fraction",
    "sup_norm",
    "sup_distance",
    "is_sphere_member",
    "enumerate_grid_sphere",
    "average_functions",
    "pointwise_product",
    "affine_lift",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class SphereError(ValueError):
    """Base class for invalid inputs to sphere operations."""


class SpaceMismatchError(SphereError):
    def __init__(self, message: str = "space mismatch") -> None:
        super().__init__(message)


class NotOnSphereError(SphereError):
    def __init__(self, message: str = "not on sphere") -> None:
        super().__init__(message)


def to_fraction(value: object) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would smuggle binary rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    """Render as ``"p/q"`` in lowest terms (``"0/1"`` for zero)."""
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class SpaceModel:
    """A finite discrete point set with a fixed canonical order."""

    points: tuple[str, ...]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        points = tuple(self.points)
        if not points:
            raise SphereError("a space needs at least one point")
        if any(not isinstance(p, str) for p in points):
            raise SphereError("point labels must be strings")
        if len(set(points)) != len(points):
            raise SphereError("point labels must be distinct")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(points)})

    @classmethod
    def standard(cls, n: int, prefix: str = "p") -> SpaceModel:
        """``{p1, ..., pn}``."""
        if n < 1:
            raise SphereError("a space needs at least one point")
        return cls(tuple(f"{prefix}{i}" for i in range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[str]:
        return iter(self.points)

    def __contains__(self, point: object) -> bool:
        return point in self._index

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise SphereError(f"unknown point {point!r}") from None


@dataclass(frozen=True)
class GridSpec:
    """The value grid ``{k/m : 0 <= k <= m}``."""

    m: int

    def __post_init__(self) -> None:
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise SphereError("grid resolution m must be a positive integer")

    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, self.m) for k in range(self.m + 1))

    def contains(self, value: Fraction) -> bool:
        return 0 <= value <= 1 and (value * self.m).denominator == 1


@dataclass(frozen=True)
class SphereFn:
    """A nonnegative function of sup norm exactly one on a finite space.

    ``values`` is aligned with ``space.points``.
    """

    space: SpaceModel
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(to_fraction(v) for v in self.values)
        if len(values) != len(self.space):
            raise SphereError(
                f"expected {len(self.space)} values, got {len(values)}"
            )
        if any(v < 0 or v > 1 for v in values):
            raise NotOnSphereError("not on sphere: values must lie in [0, 1]")
        if max(values) != 1:
            raise NotOnSphereError("not on sphere: maximum value must be 1")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, space: SpaceModel, values: Mapping[str, object]) -> SphereFn:
        if set(values) != set(space.points):
            raise SphereError("values must be given on every point and nowhere else")
        return cls(space, tuple(to_fraction(values[p]) for p in space.points))

    def __call__(self, point: str) -> Fraction:
        return self.values[self.space.index(point)]

    def items(self) -> Iterator[tuple[str, Fraction]]:
        return zip(self.space.points, self.values)

    def __repr__(self) -> str:
        vals = ", ".join(str(v) for v in self.values)
        return f"SphereFn({vals})"


def _check_same_space(*fns: SphereFn) -> SpaceModel:
    space = fns[0].space
    for f in fns[1:]:
        if f.space != space:
            raise SpaceMismatchError()
    return space


def sup_norm(values: Iterable[Fraction]) -> Fraction:
    return max((abs(v) for v in values), default=ZERO)


def sup_distance(f: SphereFn, g: SphereFn) -> Fraction:
    """``max_t |f(t) - g(t)|``."""
    _check_same_space(f, g)
    return max(abs(a - b) for a, b in zip(f.values, g.values))


def is_sphere_member(space: SpaceModel, values: Sequence[object] | Mapping[str, object]) -> bool:
    """Total predicate: all values in ``[0, 1]`` and the maximum equals 1."""
    if isinstance(values, Mapping):
        if set(values) != set(space.points):
            return False
        seq = [values[p] for p in space.points]
    else:
        seq = list(values)
        if len(seq) != len(space):
            return False
    try:
        fracs = [to_fraction(v) for v in seq]
    except (TypeError, ValueError, ZeroDivisionError):
        return False
    return all(0 <= v <= 1 for v in fracs) and max(fracs) == 1


@lru_cache(maxsize=256)
def enumerate_grid_sphere(space: SpaceModel, grid: GridSpec) -> tuple[SphereFn, ...]:
    """Every grid-valued sphere function, in lexicographic order of values.

    There are ``(m+1)**n - m**n`` of them.
    """
    grid_values = grid.values()
    out = []
    for combo in itertools.product(range(grid.m + 1), repeat=len(space)):
        if max(combo) == grid.m:
            out.append(SphereFn(space, tuple(grid_values[k] for k in combo)))
    return tuple(out)


def average_functions(fns: Sequence[SphereFn]) -> SphereFn:
    """Pointwise mean of a family sharing at least one peak point."""
    if not fns:
        raise SphereError("cannot average an empty family")
    space = _check_same_space(*fns)
    n = len(fns)
    means = tuple(sum(col, ZERO) / n for col in zip(*(f.values for f in fns)))
    if max(means) != 1:
        raise NotOnSphereError("not on sphere: the family has no common peak point")
    return SphereFn(space, means)


def pointwise_product(f: SphereFn, g: SphereFn) -> SphereFn:
    space = _check_same_space(f, g)
    prod = tuple(a * b for a, b in zip(f.values, g.values))
    if max(prod) != 1:
        raise NotOnSphereError("not on sphere: the factors share no peak point")
    return SphereFn(space, prod)


def affine_lift(v: SphereFn, r: object, u: SphereFn) -> tuple[Fraction, ...]:
    """Raw values of ``v + r*u``; whether they form a sphere function is not checked."""
    _check_same_space(v, u)
    r = to_fraction(r)
    if r < 0:
        raise SphereError("lift coefficient must be nonnegative")
    return tuple(a + r * b for a, b in zip(v.values, u.values))
