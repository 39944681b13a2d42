"""Command-line front end.

Subcommands ``verify-lemmas``, ``extract``, ``bruteforce`` and ``phase-check``
emit JSON only. Exit codes: 0 all checks pass, 1 a check failed (or an exotic
isometry was found), 2 usage error, malformed input, or size cap exceeded.
Errors go to stderr as a single line starting with ``error:``.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NoReturn
from collections.abc import Callable, Iterable, Sequence

from .bruteforce import InstanceTooLarge, default_cap, enumerate_self_isometries, sphere_size
from .extraction import (
    FAIL,
    PASS,
    SKIPPED,
    ExtractionError,
    SphereMap,
    VerificationReport,
    check_ball_transport,
    check_composition_equality,
    check_isometry,
    check_uniqueness,
    extract,
    fn_payload,
)
from .jsonio import MalformedInput, dumps, load_sphere_map
from .lattice import GridSpec, SpaceModel, SphereError, format_fraction
from .suites import run_suite, suite_names
from .witness import check_phase_isometry, first_phase_violation, phase_norms

VERIFY_DEFAULT_CAP = 400
UNIQUENESS_MAX_POINTS = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    oracle: Path | None = None
    n: int | None = None
    m: int | None = None
    cap: int | None = None
    out: Path | None = None
    jobs: int = 1
    seed: int = 0
    allow_exotic: bool = False

    def __post_init__(self) -> None:
        if self.n is not None and self.n < 1:
            raise UsageError("--n must be at least 1")
        if self.m is not None and self.m < 1:
            raise UsageError("--m must be at least 1")
        if self.cap is not None and self.cap < 1:
            raise UsageError("--cap must be positive")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def _pmap(func: Callable, items: Sequence, jobs: int) -> list:
    """Order-preserving map, fanned out to worker processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def _emit(doc: Any, out: Path | None) -> None:
    text = dumps(doc)
    if out is not None:
        out.write_text(text)
    sys.stdout.write(text)


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def cmd_verify_lemmas(cfg: RunConfig) -> int:
    cap = VERIFY_DEFAULT_CAP if cfg.cap is None else cfg.cap
    size = sphere_size(cfg.n, cfg.m)
    if size > cap:
        _fail(f"instance too large: sphere has {size} points, cap is {cap}")
        return 2
    checks = _pmap(run_suite, [(name, cfg.n, cfg.m, cfg.seed) for name in suite_names()], cfg.jobs)
    report = VerificationReport(list(checks))
    _emit(report.to_json(), cfg.out)
    if not report.ok:
        failed = [c.name for c in report.checks if c.status == FAIL]
        _fail(f"checks failed: {', '.join(failed)}")
        return 1
    return 0


def _ball_transport_chunk(args: tuple[SphereMap, Iterable[int]]):
    phi, indices = args
    domain = phi.domain_functions()
    for i in indices:
        check = check_ball_transport(phi, domain[i], isometric=True).checks[0]
        if check.status != PASS:
            return i, check
    return None


def _verify_extraction(phi: SphereMap, report: VerificationReport, jobs: int) -> dict[str, Any]:
    """Extraction plus the checks around it; returns the output document."""
    doc: dict[str, Any] = {
        "domain": list(phi.domain_space.points),
        "codomain": list(phi.codomain_space.points),
        "m": phi.grid.m,
        "sigma": None,
    }
    if not phi.is_bijective():
        report.add("bijective", FAIL, {"reason": "table is not a bijection onto the codomain grid sphere"})
        return doc
    report.add("bijective", PASS)

    size = len(phi)
    chunks = [(phi, range(k, size, jobs)) for k in range(jobs)] if jobs > 1 else [(phi, range(size))]
    bad = [hit for hit in _pmap(_ball_transport_chunk, chunks, jobs) if hit is not None]
    if bad:
        # lowest failing index across chunks, as a sequential scan would report
        _, first = min(bad, key=lambda hit: hit[0])
        report.add("ball-transport", first.status, first.counterexample)
    else:
        report.add("ball-transport", PASS)

    try:
        result = extract(phi, verify=False)
    except ExtractionError as exc:
        report.add("extraction", FAIL, {"error": str(exc), "detail": exc.payload})
        return doc
    report.add("extraction", PASS)
    sigma = result.sigma
    report.extend(check_composition_equality(phi, sigma))
    inverse_ok = all(sigma(result.tau(x)) == x for x in phi.domain_space.points)
    report.add("tau-inverts-sigma", PASS if inverse_ok else FAIL, None if inverse_ok else {"tau": result.tau.as_dict()})
    if result.coarse_agrees:
        report.add("coarse-family-agreement", PASS)
    else:
        report.add(
            "coarse-family-agreement",
            FAIL,
            {"coarse_candidates": {x: list(c) for x, c in result.coarse_candidates.items()}},
        )
    if len(sigma.from_space) <= UNIQUENESS_MAX_POINTS:
        report.extend(check_uniqueness(sigma, phi.grid))
    else:
        report.add("unique-extension", SKIPPED, {"reason": f"more than {UNIQUENESS_MAX_POINTS} points"})
    report.add(
        "peak-lift-inequality",
        SKIPPED,
        {"reason": "lifted functions leave the grid table; covered by the composition equality"},
    )
    doc["sigma"] = sigma.as_dict()
    doc["diagnostics"] = {"family_needed": result.family_needed}
    return doc


def _load(cfg: RunConfig) -> SphereMap | None:
    try:
        return load_sphere_map(cfg.oracle)
    except OSError as exc:
        _fail(f"cannot read {cfg.oracle}: {exc.strerror}")
    except (MalformedInput, SphereError) as exc:
        _fail(f"malformed oracle: {exc}")
    return None


def _finish(doc: dict[str, Any], report: VerificationReport, cfg: RunConfig) -> int:
    doc["report"] = report.to_json()
    _emit(doc, cfg.out)
    if report.ok:
        return 0
    first = next(c for c in report.checks if c.status == FAIL)
    _fail(f"check {first.name} failed")
    return 1


def cmd_extract(cfg: RunConfig) -> int:
    phi = _load(cfg)
    if phi is None:
        return 2
    report = check_isometry(phi)
    if not report.ok:
        doc = {
            "domain": list(phi.domain_space.points),
            "codomain": list(phi.codomain_space.points),
            "m": phi.grid.m,
            "sigma": None,
        }
        return _finish(doc, report, cfg)
    doc = _verify_extraction(phi, report, cfg.jobs)
    return _finish(doc, report, cfg)


def cmd_phase_check(cfg: RunConfig) -> int:
    phi = _load(cfg)
    if phi is None:
        return 2
    report = VerificationReport()
    violation = first_phase_violation(phi)
    if violation is None:
        report.add("phase-condition", PASS)
    else:
        f, g = violation
        report.add(
            "phase-condition",
            FAIL,
            {
                "f": fn_payload(f.values, phi.domain_space),
                "g": fn_payload(g.values, phi.domain_space),
                "norms": [format_fraction(x) for x in phase_norms(f.values, g.values)],
                "image_norms": [format_fraction(x) for x in phase_norms(phi(f).values, phi(g).values)],
            },
        )
    report.extend(check_phase_isometry(phi))
    doc = {
        "domain": list(phi.domain_space.points),
        "codomain": list(phi.codomain_space.points),
        "m": phi.grid.m,
        "sigma": None,
    }
    if violation is None and report.ok:
        report.extend(check_isometry(phi))
        if report.ok:
            doc = _verify_extraction(phi, report, cfg.jobs)
    else:
        report.add("extraction", SKIPPED, {"reason": "phase hypothesis fails"})
    return _finish(doc, report, cfg)


def cmd_bruteforce(cfg: RunConfig) -> int:
    cap = default_cap() if cfg.cap is None else cfg.cap
    try:
        census = enumerate_self_isometries(SpaceModel.standard(cfg.n), GridSpec(cfg.m), cap=cap, jobs=cfg.jobs)
    except InstanceTooLarge as exc:
        _fail(str(exc))
        return 2
    _emit(census.to_json(), cfg.out)
    if census.exotic and not cfg.allow_exotic:
        _fail(f"{len(census.exotic)} exotic isometries found")
        return 1
    return 0


COMMANDS = {
    "verify-lemmas": cmd_verify_lemmas,
    "extract": cmd_extract,
    "bruteforce": cmd_bruteforce,
    "phase-check": cmd_phase_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sphere-rigidity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, default=None, help="also write the JSON document here")
        p.add_argument("--jobs", type=int, default=1, help="worker processes (output is identical for any value)")

    p = sub.add_parser("verify-lemmas", help="exhaustive property sweeps on the grid sphere")
    p.add_argument("--n", type=int, required=True, help="number of points")
    p.add_argument("--m", type=int, required=True, help="grid resolution")
    p.add_argument("--cap", type=int, default=None, help=f"sphere size cap (default {VERIFY_DEFAULT_CAP})")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized near-miss oracles")
    common(p)

    for name, help_text in (("extract", "recover the point map from an oracle"), ("phase-check", "phase-isometry checks on an oracle")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("oracle", type=Path, help="oracle JSON file")
        common(p)

    p = sub.add_parser("bruteforce", help="census of grid sphere self-isometries")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--cap", type=int, default=None, help="sphere size cap (default 12 or $SPHERE_RIGIDITY_CAP)")
    p.add_argument("--allow-exotic", action="store_true", help="exit 0 even if exotic isometries are found")
    common(p)
    return parser


def parse_config(argv: Sequence[str] | None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        command=args.command,
        oracle=getattr(args, "oracle", None),
        n=getattr(args, "n", None),
        m=getattr(args, "m", None),
        cap=getattr(args, "cap", None),
        out=args.out,
        jobs=args.jobs,
        seed=getattr(args, "seed", 0),
        allow_exotic=getattr(args, "allow_exotic", False),
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        _fail(str(exc))
        return 2
    except SphereError as exc:
        _fail(str(exc))
        return 2
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
