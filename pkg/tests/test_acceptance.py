"""Acceptance criteria, one test each, all exact.

Each test prints a single ``PASS``/``FAIL`` line; the lines are repeated in
the terminal summary so they show up without ``-s``.
"""

import itertools
import json
import random
from fractions import Fraction

import pytest

from sphere_rigidity.bruteforce import enumerate_self_isometries
from sphere_rigidity.cli import main
from sphere_rigidity.extraction import (
    PointMap,
    SphereMap,
    all_point_maps,
    check_ball_transport,
    check_composition_equality,
    check_isometry,
    check_uniqueness,
    composition_operator,
    extend_linear,
    extract_point_map,
)
from sphere_rigidity.jsonio import dumps, sphere_map_to_json
from sphere_rigidity.lattice import GridSpec, SpaceModel, SphereFn, enumerate_grid_sphere, sup_distance
from sphere_rigidity.peaks import peak_family_included
from sphere_rigidity.setcalc import in_d_criterion, in_d_definition, max_set, max_set_witness, zero_set
from sphere_rigidity.witness import (
    check_phase_isometry,
    first_phase_violation,
    lifted_peak,
    partition_levels,
    preserves_phase,
)

RESULTS: list[str] = []


def record(number, title, failures):
    line = f"{'PASS' if not failures else 'FAIL'} criterion {number:>2}: {title}"
    if failures:
        line += f" ({len(failures)} failures, first {failures[0]!r})"
    RESULTS.append(line)
    print(line)
    assert not failures, line


def sphere(n, m):
    space, grid = SpaceModel.standard(n), GridSpec(m)
    return space, grid, enumerate_grid_sphere(space, grid)


def ball(f, fns):
    return frozenset(h for h in fns if in_d_definition(f, h))


def test_ball_criterion():
    bad = []
    for n, m in itertools.product((1, 2, 3), repeat=2):
        _, _, fns = sphere(n, m)
        bad += [(f, h) for f in fns for h in fns if in_d_definition(f, h) != in_d_criterion(f, h)]
    record(1, "ball membership matches the max/zero-set criterion, n, m in {1,2,3}", bad)


def test_peak_separation():
    bad = []
    for n, m in itertools.product((1, 2, 3), repeat=2):
        space = SpaceModel.standard(n)
        bad += [
            (n, m, t0, t1)
            for t0 in space.points
            for t1 in space.points
            if peak_family_included(space, t0, t1, GridSpec(m)) != (t0 == t1)
        ]
    record(2, "peak families nest only at equal points, n, m <= 3", bad)


def test_ball_inclusion_both_directions():
    bad = []
    for n, m in itertools.product((1, 2, 3), (1, 2)):
        _, _, fns = sphere(n, m)
        balls = {f: ball(f, fns) for f in fns}
        for f in fns:
            for g in fns:
                hyp = max_set(g).issubset(max_set(f)) and zero_set(g).issubset(zero_set(f))
                if hyp and not balls[f] <= balls[g]:
                    bad.append(("forward", f, g))
                if not max_set(g).issubset(max_set(f)):
                    w = max_set_witness(f, g)
                    if not (in_d_definition(f, w) and not in_d_definition(g, w)):
                        bad.append(("witness", f, g, w))
    record(3, "ball inclusion forward and separating witness, n <= 3, m <= 2", bad)


def test_ball_transport():
    bad = []
    for n, m in itertools.product((1, 2, 3), (1, 2)):
        space, grid, fns = sphere(n, m)
        for sigma in all_point_maps(space, space):
            phi = composition_operator(sigma, grid)
            for f in fns:
                if not check_ball_transport(phi, f).ok:
                    bad.append((sigma.as_dict(), f))
                # independent set comparison
                if frozenset(phi(h) for h in ball(f, fns)) != ball(phi(f), fns):
                    bad.append(("sets", sigma.as_dict(), f))
    record(4, "composition oracles carry unit balls onto unit balls, n <= 3, m <= 2", bad)


def test_extraction_round_trip():
    bad = []
    for n, m in itertools.product((1, 2, 3, 4), (1, 2, 3)):
        space, grid, fns = sphere(n, m)
        for sigma in all_point_maps(space, space):
            phi = composition_operator(sigma, grid)
            got = extract_point_map(phi)
            if got != sigma:
                bad.append((n, m, sigma.as_dict(), got.as_dict()))
            if not check_composition_equality(phi, got).ok:
                bad.append(("composition", n, m, sigma.as_dict()))
            for f in fns:
                if any(phi(f)(y) != f(sigma(y)) for y in space.points):
                    bad.append(("pointwise", n, m, sigma.as_dict(), f))
    record(5, "extraction recovers every permutation exactly, n <= 4, m <= 3", bad)


def test_peak_lift_postconditions():
    bad = []
    for n, m in itertools.product((1, 2, 3), (1, 2, 3, 4)):
        space, _, fns = sphere(n, m)
        for v in fns:
            for y0 in space.points:
                if v(y0) == 1:
                    continue
                u0, w = lifted_peak(v, y0)
                part = partition_levels(v, y0)
                ok = (
                    u0(y0) == 1
                    and max(u0.values) == 1
                    and all(0 <= x <= 1 for x in w.values)
                    and w(y0) == 1
                    and all(
                        w(y) <= 1 - part.r / 2 ** (k + 1) < 1
                        for k, members in part.bands
                        for y in members.members
                    )
                )
                if not ok:
                    bad.append((v, y0))
    record(6, "peak lift postconditions and strict band bound, n <= 3, m <= 4", bad)


def independent_census(n, m):
    """All bijections of the grid sphere checked pairwise with exact distances."""
    space, _, fns = sphere(n, m)
    size = len(fns)
    d = [[sup_distance(f, g) for g in fns] for f in fns]
    out = []
    for p in itertools.permutations(range(size)):
        if all(d[p[i]][p[j]] == d[i][j] for i in range(size) for j in range(size)):
            induced = any(
                all(fns[p[i]].values == tuple(f(sigma(y)) for y in space.points) for i, f in enumerate(fns))
                for sigma in all_point_maps(space, space)
            )
            out.append((p, induced))
    return out


def test_five_point_census():
    oracle = independent_census(2, 2)
    census = enumerate_self_isometries(SpaceModel.standard(2), GridSpec(2))
    bad = []
    if len(oracle) != 2 or not all(ind for _, ind in oracle):
        bad.append(("oracle", oracle))
    if census.isometries != [p for p, _ in oracle]:
        bad.append(("census", census.isometries))
    if [e.tag for e in census.entries] != ["induced", "induced"]:
        bad.append(("tags", [e.tag for e in census.entries]))
    record(7, "the 5-point sphere has exactly 2 self-isometries, both induced", bad)


def violator():
    space, grid = SpaceModel.standard(2), GridSpec(1)
    f = lambda *v: SphereFn(space, v)  # noqa: E731
    return SphereMap.from_pairs(space, space, grid, [(f(1, 0), f(1, 0)), (f(0, 1), f(1, 1)), (f(1, 1), f(0, 1))])


def bijective_tables(space, grid, fns, rng, samples):
    if len(fns) <= 7:
        perms = itertools.permutations(fns)
    else:
        perms = (rng.sample(fns, len(fns)) for _ in range(samples))
    for images in perms:
        yield SphereMap(space, space, grid, tuple(images))


def test_phase_suite():
    bad = []
    rng = random.Random(0)
    for n, m in itertools.product((1, 2, 3), (1, 2)):
        space, grid, fns = sphere(n, m)
        candidates = [composition_operator(s, grid) for s in all_point_maps(space, space)]
        for phi in candidates:
            if first_phase_violation(phi) is not None or not check_phase_isometry(phi).ok:
                bad.append(("composition", n, m))
        census = enumerate_self_isometries(space, grid, cap=len(fns))
        tables = list(bijective_tables(space, grid, list(fns), rng, 2000))
        tables += [SphereMap(space, space, grid, tuple(fns[i] for i in p)) for p in census.isometries]
        for phi in tables:
            if first_phase_violation(phi) is None:
                if not check_isometry(phi).ok or check_phase_isometry(phi).status_of("phase-implies-isometry") != "pass":
                    bad.append(("phase table not isometric", n, m, phi.images))
    T = violator()
    pair = first_phase_violation(T)
    space = T.domain_space
    if pair != (SphereFn(space, (0, 1)), SphereFn(space, (1, 0))) or preserves_phase(T, *pair):
        bad.append(("violator pair", pair))
    report = check_phase_isometry(T)
    if [c.status for c in report.checks] != ["pass", "skipped", "pass"]:
        bad.append(("violator report", report.to_json()))
    record(8, "phase suite: compositions pass, phase tables are isometries, violator rejected", bad)


def test_uniqueness_and_linear_extension():
    bad = []
    for n in range(1, 6):
        space = SpaceModel.standard(n)
        for sigma in all_point_maps(space, space):
            if not check_uniqueness(sigma, GridSpec(1)).ok:
                bad.append(sigma.as_dict())
    rng = random.Random(0)

    def rational():
        return Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))

    for _ in range(1000):
        n = rng.randint(1, 6)
        space = SpaceModel.standard(n)
        sigma = PointMap(space, space, tuple(rng.sample(space.points, n)))
        T = extend_linear(sigma)
        f = [rational() for _ in range(n)]
        g = [rational() for _ in range(n)]
        a, b = rational(), rational()
        combo = [a * x + b * y for x, y in zip(f, g)]
        if T(combo) != tuple(a * x + b * y for x, y in zip(T(f), T(g))):
            bad.append(("linear", sigma.as_dict(), f, g))
        if T.norm(T(f)) != T.norm(f):
            bad.append(("norm", sigma.as_dict(), f))
    record(9, "unique extension for all permutations n <= 5, m = 1; linear and norm-preserving on 1000 samples", bad)


def test_cli_determinism(tmp_path, capsys):
    space = SpaceModel.standard(3)
    sigma = PointMap.from_mapping(space, space, {"p1": "p3", "p2": "p1", "p3": "p2"})
    oracle = tmp_path / "oracle.json"
    oracle.write_text(dumps(sphere_map_to_json(composition_operator(sigma, GridSpec(2)))))
    bad_oracle = tmp_path / "violator.json"
    bad_oracle.write_text(dumps(sphere_map_to_json(violator())))
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"type": "composition", "sigma": {"p1": "p2", "p2": "p1"}, "m": 3}))
    commands = [
        ["verify-lemmas", "--n", "3", "--m", "2"],
        ["extract", str(oracle)],
        ["extract", str(short)],
        ["phase-check", str(oracle)],
        ["phase-check", str(bad_oracle)],
        ["bruteforce", "--n", "2", "--m", "2"],
        ["bruteforce", "--n", "3", "--m", "1", "--allow-exotic"],
    ]
    bad = []
    for argv in commands:
        outputs = []
        for jobs in ("1", "1", "4", "4"):
            target = tmp_path / f"out-{jobs}-{len(outputs)}.json"
            code = main([*argv, "--jobs", jobs, "--out", str(target)])
            stdout = capsys.readouterr().out
            outputs.append((code, stdout, target.read_bytes()))
        if any(o != outputs[0] for o in outputs) or outputs[0][1].encode() != outputs[0][2]:
            bad.append(argv)
    record(10, "CLI output byte-identical across repeated runs with --jobs 1 and 4", bad)
