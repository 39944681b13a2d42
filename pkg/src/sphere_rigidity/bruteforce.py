"""Complete census of self-isometries of a small grid sphere.

Every distance-preserving bijection of the grid sphere is found by
backtracking (see :func:`sphere_rigidity.kernels.isometry_search`) and then
classified as induced by a point permutation or not. Non-induced ("exotic")
entries are data, not errors: the grid sphere is only a finite shadow of the
full sphere.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any
from collections.abc import Iterable, Sequence

from . import kernels
from .extraction import PointMap, SphereMap, all_point_maps, composition_operator
from .lattice import GridSpec, SpaceModel, SphereError, SphereFn, enumerate_grid_sphere

__all__ = [
    "DEFAULT_CAP",
    "InstanceTooLarge",
    "CensusEntry",
    "IsometryCensus",
    "default_cap",
    "sphere_size",
    "enumerate_self_isometries",
    "induced_permutations",
    "classify",
    "perturbed_oracle",
    "is_isometry_perm",
]

DEFAULT_CAP = 12
CAP_ENV = "SPHERE_RIGIDITY_CAP"


class InstanceTooLarge(SphereError):
    def __init__(self, size: int, cap: int) -> None:
        super().__init__(f"instance too large: sphere has {size} points, cap is {cap}")
        self.size = size
        self.cap = cap


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_CAP
    cap = int(raw)
    if cap < 1:
        raise SphereError(f"{CAP_ENV} must be positive")
    return cap


def sphere_size(n: int, m: int) -> int:
    return (m + 1) ** n - m**n


@dataclass(frozen=True)
class CensusEntry:
    perm: tuple[int, ...]
    sigma: PointMap | None  # None marks an exotic entry

    @property
    def tag(self) -> str:
        return "induced" if self.sigma is not None else "exotic"

    def to_json(self) -> dict[str, Any]:
        return {
            "perm": list(self.perm),
            "tag": self.tag,
            "sigma": None if self.sigma is None else self.sigma.as_dict(),
        }


@dataclass(frozen=True)
class IsometryCensus:
    space: SpaceModel
    grid: GridSpec
    sphere_size: int
    entries: tuple[CensusEntry, ...]

    @property
    def isometries(self) -> list[tuple[int, ...]]:
        return [e.perm for e in self.entries]

    @property
    def induced(self) -> list[CensusEntry]:
        return [e for e in self.entries if e.sigma is not None]

    @property
    def exotic(self) -> list[CensusEntry]:
        return [e for e in self.entries if e.sigma is None]

    def to_json(self) -> dict[str, Any]:
        return {
            "space": list(self.space.points),
            "m": self.grid.m,
            "sphere_size": self.sphere_size,
            "isometries": [e.to_json() for e in self.entries],
            "counts": {"total": len(self.entries), "induced": len(self.induced), "exotic": len(self.exotic)},
        }


def _coded_sphere_distances(space: SpaceModel, grid: GridSpec) -> list[list[int]]:
    fns = enumerate_grid_sphere(space, grid)
    # grid values k/m are coded as k directly
    coded = [tuple(int(v * grid.m) for v in f.values) for f in fns]
    return kernels.distance_matrix(coded)


def _search_branch(args: tuple[list[list[int]], int]) -> list[tuple[int, ...]]:
    dist, first = args
    return kernels.isometry_search(dist, first)


def is_isometry_perm(dist: Sequence[Sequence[int]], perm: Sequence[int]) -> bool:
    n = len(perm)
    return all(dist[perm[i]][perm[j]] == dist[i][j] for i in range(n) for j in range(i + 1, n))


def induced_permutations(space: SpaceModel, grid: GridSpec) -> dict[tuple[int, ...], PointMap]:
    """Index permutation of the grid sphere induced by each point bijection."""
    fns = enumerate_grid_sphere(space, grid)
    lookup = {f: i for i, f in enumerate(fns)}
    out: dict[tuple[int, ...], PointMap] = {}
    for sigma in all_point_maps(space, space):
        idx = sigma.index_map()
        perm = tuple(lookup[SphereFn(space, tuple(f.values[i] for i in idx))] for f in fns)
        out[perm] = sigma
    return out


def classify(perm: Sequence[int], space: SpaceModel, grid: GridSpec) -> PointMap | None:
    """The point bijection ``sigma`` with ``fns[perm[i]] == fns[i] o sigma`` for all ``i``, if any."""
    fns = enumerate_grid_sphere(space, grid)
    for sigma in all_point_maps(space, space):
        idx = sigma.index_map()
        if all(fns[perm[i]].values == tuple(f.values[k] for k in idx) for i, f in enumerate(fns)):
            return sigma
    return None


def enumerate_self_isometries(
    space: SpaceModel,
    grid: GridSpec,
    cap: int | None = None,
    jobs: int = 1,
) -> IsometryCensus:
    """Every self-isometry of the grid sphere, classified, in lexicographic order."""
    cap = default_cap() if cap is None else cap
    size = sphere_size(len(space), grid.m)
    if size > cap:
        raise InstanceTooLarge(size, cap)
    dist = _coded_sphere_distances(space, grid)
    if jobs > 1 and size > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_search_branch, [(dist, c) for c in range(size)])
            perms = [p for part in parts for p in part]
    else:
        perms = kernels.isometry_search(dist)
    perms.sort()
    induced = induced_permutations(space, grid)
    entries = tuple(CensusEntry(p, induced.get(p)) for p in perms)
    return IsometryCensus(space, grid, size, entries)


def perturbed_oracle(sigma: PointMap, grid: GridSpec, swaps: Iterable[tuple[int, int]]) -> SphereMap:
    """Composition operator of ``sigma`` with the images of table entries ``i`` and ``j`` exchanged."""
    base = composition_operator(sigma, grid)
    images = list(base.images)
    for i, j in swaps:
        if not (0 <= i < len(images) and 0 <= j < len(images)):
            raise SphereError(f"invalid swap ({i}, {j}) for a table of {len(images)} entries")
        images[i], images[j] = images[j], images[i]
    return SphereMap(base.domain_space, base.codomain_space, grid, tuple(images))
