"""Peak lifting and phase-isometry checks.

Given ``v`` on the sphere and a point ``y0`` with ``v(y0) < 1``,
:func:`peak_lift` builds ``u0`` peaking at ``y0`` such that
``v + (1 - v(y0)) * u0`` is again a sphere function, now peaking at ``y0``.
Points are sorted into level bands by their deviation ``|v(y) - v(y0)|``;
each band gets its own zeroed summand, and on a finite space only finitely
many bands are populated so the dyadic series collapses to a finite sum plus
an exact tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from collections.abc import Sequence

from .extraction import FAIL, PASS, SKIPPED, SphereMap, VerificationReport, fn_payload
from .lattice import SphereError, SphereFn, affine_lift, format_fraction, sup_norm
from .setcalc import PointSet

__all__ = [
    "LevelPartition",
    "partition_levels",
    "band_functions",
    "peak_lift",
    "lifted_peak",
    "phase_norms",
    "preserves_phase",
    "first_phase_violation",
    "check_phase_isometry",
]


class NotApplicableError(SphereError):
    pass


@dataclass(frozen=True)
class LevelPartition:
    y0: str
    r: Fraction
    far: PointSet  # deviation >= r/4
    bands: tuple[tuple[int, PointSet], ...]  # (n, points with r/2^(n+2) <= dev <= r/2^(n+1)), nonempty only
    residual: PointSet  # deviation exactly 0

    @property
    def top_band(self) -> int:
        return self.bands[-1][0] if self.bands else 0

    def band(self, n: int) -> PointSet:
        for k, members in self.bands:
            if k == n:
                return members
        return PointSet(self.far.space, frozenset())

    def bands_of(self, point: str) -> tuple[int, ...]:
        return tuple(n for n, members in self.bands if point in members)


def _band_indices(dev: Fraction, r: Fraction) -> list[int]:
    found = []
    n = 1
    while r / 2 ** (n + 1) >= dev:
        if dev >= r / 2 ** (n + 2):
            found.append(n)
        n += 1
    return found


def partition_levels(v: SphereFn, y0: str) -> LevelPartition:
    base = v(y0)
    if base == 1:
        raise NotApplicableError("not applicable: v already peaks at y0")
    r = 1 - base
    space = v.space
    far: set[str] = set()
    residual: set[str] = set()
    bands: dict[int, set[str]] = {}
    for p, value in v.items():
        dev = abs(value - base)
        if dev == 0:
            if p != y0:
                residual.add(p)
            continue
        if dev >= r / 4:
            far.add(p)
        # a deviation of exactly r/4 sits in both the far set and band 1
        for n in _band_indices(dev, r):
            bands.setdefault(n, set()).add(p)
    return LevelPartition(
        y0=y0,
        r=r,
        far=PointSet(space, frozenset(far)),
        bands=tuple((n, PointSet(space, frozenset(bands[n]))) for n in sorted(bands)),
        residual=PointSet(space, frozenset(residual)),
    )


def band_functions(part: LevelPartition, n: int) -> SphereFn:
    """Summand ``u_n``: 1 at ``y0``, 0 on the far set and on band ``n``, 1 elsewhere."""
    space = part.far.space
    zeroed = part.far.members | part.band(n).members
    return SphereFn(space, tuple(0 if p in zeroed else 1 for p in space.points))


def peak_lift(v: SphereFn, y0: str) -> SphereFn:
    """``u0 = sum_n u_n / 2^n``, exactly.

    Beyond the top populated band every ``u_n`` is the same function, so
    that tail sums to ``2^-N`` times it.
    """
    part = partition_levels(v, y0)
    space = v.space
    top = part.top_band
    total = [Fraction(0)] * len(space)
    for n in range(1, top + 1):
        un = band_functions(part, n)
        w = Fraction(1, 2**n)
        total = [acc + w * x for acc, x in zip(total, un.values)]
    tail = band_functions(part, top + 1)
    w = Fraction(1, 2**top)
    total = [acc + w * x for acc, x in zip(total, tail.values)]
    return SphereFn(space, tuple(total))


def lifted_peak(v: SphereFn, y0: str) -> tuple[SphereFn, SphereFn]:
    """``(u0, w)`` with ``w = v + (1 - v(y0)) * u0`` peaking at ``y0``."""
    u0 = peak_lift(v, y0)
    raw = affine_lift(v, 1 - v(y0), u0)
    return u0, SphereFn(v.space, raw)


def phase_norms(f: Sequence[Fraction], g: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Sorted pair ``(||f+g||, ||f-g||)``."""
    plus = sup_norm(a + b for a, b in zip(f, g))
    minus = sup_norm(a - b for a, b in zip(f, g))
    return (plus, minus) if plus <= minus else (minus, plus)


def preserves_phase(T: SphereMap, f: SphereFn, g: SphereFn) -> bool:
    """``{||Tf+Tg||, ||Tf-Tg||} == {||f+g||, ||f-g||}``."""
    return phase_norms(T(f).values, T(g).values) == phase_norms(f.values, g.values)


def first_phase_violation(T: SphereMap) -> tuple[SphereFn, SphereFn] | None:
    pairs = list(T.pairs())
    for i, (f, u) in enumerate(pairs):
        for g, w in pairs[i + 1 :]:
            if phase_norms(u.values, w.values) != phase_norms(f.values, g.values):
                return f, g
    return None


def _norm_payload(T: SphereMap, f: SphereFn, g: SphereFn) -> dict:
    u, w = T(f), T(g)
    return {
        "f": fn_payload(f.values, T.domain_space),
        "g": fn_payload(g.values, T.domain_space),
        "norms": [format_fraction(x) for x in phase_norms(f.values, g.values)],
        "image_norms": [format_fraction(x) for x in phase_norms(u.values, w.values)],
    }


def check_phase_isometry(T: SphereMap) -> VerificationReport:
    """Three exhaustive pair scans.

    ``positivity``: ``||f-g|| <= ||f+g||`` on the domain and on the images.
    ``phase-implies-isometry``: if every pair preserves phase, every pair
    preserves distance (skipped when the hypothesis fails).
    ``min-identity``: for each pair that preserves phase,
    ``||Tf-Tg|| = min(||f+g||, ||f-g||) = ||f-g||``.
    """
    report = VerificationReport()
    pairs = list(T.pairs())
    positivity_bad = None
    min_bad = None
    phase_bad = None
    distance_bad = None
    for i, (f, u) in enumerate(pairs):
        for g, w in pairs[i + 1 :]:
            plus = sup_norm(a + b for a, b in zip(f.values, g.values))
            minus = sup_norm(a - b for a, b in zip(f.values, g.values))
            iplus = sup_norm(a + b for a, b in zip(u.values, w.values))
            iminus = sup_norm(a - b for a, b in zip(u.values, w.values))
            if positivity_bad is None and (minus > plus or iminus > iplus):
                positivity_bad = (f, g)
            same_phase = sorted((plus, minus)) == sorted((iplus, iminus))
            if not same_phase:
                if phase_bad is None:
                    phase_bad = (f, g)
            elif min_bad is None and not (iminus == min(plus, minus) == minus):
                min_bad = (f, g)
            if distance_bad is None and iminus != minus:
                distance_bad = (f, g)
    report.add(
        "positivity",
        PASS if positivity_bad is None else FAIL,
        None if positivity_bad is None else _norm_payload(T, *positivity_bad),
    )
    if phase_bad is not None:
        report.add(
            "phase-implies-isometry",
            SKIPPED,
            {"reason": "phase condition fails", "pair": _norm_payload(T, *phase_bad)},
        )
    else:
        report.add(
            "phase-implies-isometry",
            PASS if distance_bad is None else FAIL,
            None if distance_bad is None else _norm_payload(T, *distance_bad),
        )
    report.add(
        "min-identity",
        PASS if min_bad is None else FAIL,
        None if min_bad is None else _norm_payload(T, *min_bad),
    )
    return report
