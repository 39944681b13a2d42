"""Exhaustive sweeps over a grid sphere, one named check each.

Every sweep takes ``(n, m, seed)`` and returns a :class:`Check`; the CLI's
``verify-lemmas`` command runs them all, possibly in worker processes.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable

import numpy as np

from . import kernels
from .extraction import (
    FAIL,
    PASS,
    Check,
    ExtractionError,
    all_point_maps,
    check_isometry,
    composition_operator,
    extract,
    fn_payload,
)
from .lattice import GridSpec, SpaceModel, SphereFn, average_functions, enumerate_grid_sphere
from .peaks import intersect_max_sets, peak_family, peak_family_included
from .setcalc import (
    d_subset_on_grid,
    in_d_criterion,
    in_d_definition,
    max_set,
    max_set_witness,
    zero_set,
)
from .bruteforce import induced_permutations, perturbed_oracle

__all__ = ["SUITES", "run_suite", "suite_names"]


def _pair(space: SpaceModel, **fns: SphereFn) -> dict:
    return {k: fn_payload(f.values, space) for k, f in fns.items()}


def sup_metric(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    fns = enumerate_grid_sphere(space, grid)
    d = np.array(kernels.distance_matrix([tuple(int(v * grid.m) for v in f.values) for f in fns]), dtype=np.int64)
    off = ~np.eye(len(fns), dtype=bool)
    if d.diagonal().any() or not (d == d.T).all() or (d[off] <= 0).any():
        i, j = next((i, j) for i in range(len(fns)) for j in range(len(fns))
                    if d[i, j] != d[j, i] or (d[i, j] == 0) != (i == j))
        return Check("sup-metric", FAIL, _pair(space, f=fns[i], g=fns[j]))
    for j in range(len(fns)):
        # d[i, k] <= d[i, j] + d[j, k] for all i, k
        slack = d[:, j, None] + d[None, j, :] - d
        if (slack < 0).any():
            i, k = (int(x) for x in np.argwhere(slack < 0)[0])
            return Check("sup-metric", FAIL, {"reason": "triangle", **_pair(space, f=fns[i], g=fns[j], h=fns[k])})
    return Check("sup-metric", PASS)


def max_zero_disjoint(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    for f in enumerate_grid_sphere(space, grid):
        if not max_set(f).members or max_set(f).members & zero_set(f).members:
            return Check("max-zero-disjoint", FAIL, _pair(space, f=f))
    return Check("max-zero-disjoint", PASS)


def ball_criterion(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    fns = enumerate_grid_sphere(space, grid)
    for f in fns:
        for h in fns:
            if in_d_definition(f, h) != in_d_criterion(f, h):
                return Check("ball-criterion", FAIL, _pair(space, f=f, h=h))
    return Check("ball-criterion", PASS)


def peak_separation(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    for t0 in space.points:
        for t1 in space.points:
            if peak_family_included(space, t0, t1, grid) != (t0 == t1):
                return Check("peak-separation", FAIL, {"t0": t0, "t1": t1})
    return Check("peak-separation", PASS)


def inclusion_forward(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    fns = enumerate_grid_sphere(space, grid)
    for f in fns:
        mf, zf = max_set(f), zero_set(f)
        for g in fns:
            if max_set(g).issubset(mf) and zero_set(g).issubset(zf) and not d_subset_on_grid(f, g, grid):
                return Check("inclusion-forward", FAIL, _pair(space, f=f, g=g))
    return Check("inclusion-forward", PASS)


def inclusion_witness(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    fns = enumerate_grid_sphere(space, grid)
    for f in fns:
        for g in fns:
            if max_set(g).issubset(max_set(f)):
                continue
            w = max_set_witness(f, g)
            ok = (
                in_d_criterion(f, w)
                and in_d_definition(f, w)
                and not in_d_criterion(g, w)
                and not in_d_definition(g, w)
                and max_set(w) == max_set(f)
            )
            if not ok:
                return Check("inclusion-witness", FAIL, _pair(space, f=f, g=g, w=w))
    return Check("inclusion-witness", PASS)


def averaging(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    for x in space.points:
        family = peak_family(space, x, grid)
        groups = list(itertools.combinations(family, 2)) + [tuple(family)]
        for group in groups:
            g = average_functions(list(group))
            want_max = intersect_max_sets(list(group))
            want_zero = frozenset.intersection(*(zero_set(f).members for f in group))
            if max_set(g) != want_max or zero_set(g).members != want_zero:
                return Check("averaging", FAIL, {"point": x, "family": [fn_payload(f.values, space) for f in group]})
    return Check("averaging", PASS)


def finite_intersection(space: SpaceModel, grid: GridSpec, seed: int) -> Check:
    """Images of peak functions under composition oracles keep a common peak.

    Checked for every pair and for the whole peak family. When the pair's
    average is itself a grid function its image peaks inside the common set.
    """
    for sigma in all_point_maps(space, space):
        phi = composition_operator(sigma, grid)
        for x in space.points:
            family = peak_family(space, x, grid)
            if not intersect_max_sets([phi(f) for f in family]).members:
                return Check("finite-intersection", FAIL, {"sigma": sigma.as_dict(), "point": x, "family": "all"})
            for f1, f2 in itertools.combinations_with_replacement(family, 2):
                common = intersect_max_sets([phi(f1), phi(f2)])
                avg = average_functions([f1, f2])
                on_grid = all(grid.contains(v) for v in avg.values)
                if not common.members or (on_grid and not max_set(phi(avg)).issubset(common)):
                    return Check(
                        "finite-intersection",
                        FAIL,
                        {"sigma": sigma.as_dict(), "point": x, **_pair(space, f1=f1, f2=f2)},
                    )
    return Check("finite-intersection", PASS)


def perturbed_rejection(space: SpaceModel, grid: GridSpec, seed: int, trials: int = 25) -> Check:
    """Seeded near-miss oracles are rejected by the isometry check or by extraction."""
    rng = random.Random(seed)
    size = len(enumerate_grid_sphere(space, grid))
    if size < 2:
        return Check("perturbed-rejection", PASS)
    sigmas = all_point_maps(space, space)
    induced = set(induced_permutations(space, grid))
    fns = enumerate_grid_sphere(space, grid)
    lookup = {f: i for i, f in enumerate(fns)}
    for _ in range(trials):
        sigma = rng.choice(sigmas)
        i, j = rng.sample(range(size), 2)
        phi = perturbed_oracle(sigma, grid, [(i, j)])
        if tuple(lookup[u] for u in phi.images) in induced:
            continue
        if not check_isometry(phi).ok:
            continue
        try:
            extract(phi)
        except ExtractionError:
            continue
        return Check("perturbed-rejection", FAIL, {"sigma": sigma.as_dict(), "swap": [i, j]})
    return Check("perturbed-rejection", PASS)


SUITES: dict[str, Callable[[SpaceModel, GridSpec, int], Check]] = {
    "sup-metric": sup_metric,
    "max-zero-disjoint": max_zero_disjoint,
    "ball-criterion": ball_criterion,
    "peak-separation": peak_separation,
    "inclusion-forward": inclusion_forward,
    "inclusion-witness": inclusion_witness,
    "averaging": averaging,
    "finite-intersection": finite_intersection,
    "perturbed-rejection": perturbed_rejection,
}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(args: tuple[str, int, int, int]) -> Check:
    name, n, m, seed = args
    return SUITES[name](SpaceModel.standard(n), GridSpec(m), seed)
