"""Recovering the inducing point map from a finite isometry oracle.

An oracle is a :class:`SphereMap`: an explicit table sending every grid
sphere function on the domain ``X`` to a sphere function on the codomain
``Y``. Point maps run ``Y -> X``; the composition operator of ``sigma``
sends ``f`` to ``f o sigma``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any
from collections.abc import Iterable, Mapping, Sequence

from . import kernels
from .lattice import (
    GridSpec,
    SpaceMismatchError,
    SpaceModel,
    SphereError,
    SphereFn,
    enumerate_grid_sphere,
    format_fraction,
    sup_norm,
    to_fraction,
)
from .peaks import intersect_max_sets, peak_family
from .setcalc import in_d_definition

__all__ = [
    "ExtractionError",
    "SphereMap",
    "PointMap",
    "Check",
    "VerificationReport",
    "ExtractionResult",
    "LinearExtension",
    "fn_payload",
    "check_isometry",
    "check_ball_transport",
    "composition_operator",
    "identity_map",
    "extract",
    "extract_point_map",
    "check_composition_equality",
    "extend_linear",
    "check_uniqueness",
    "all_point_maps",
]

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class ExtractionError(SphereError):
    """Extraction aborted; ``payload`` carries the counterexample."""

    def __init__(self, message: str, payload: Any = None) -> None:
        super().__init__(message)
        self.payload = payload


def fn_payload(values: Iterable[Fraction], space: SpaceModel) -> dict[str, str]:
    return {p: format_fraction(v) for p, v in zip(space.points, values)}


@dataclass(frozen=True)
class PointMap:
    """A bijection ``from_space -> to_space``; ``assignment[i]`` is the image of point ``i``."""

    from_space: SpaceModel
    to_space: SpaceModel
    assignment: tuple[str, ...]

    def __post_init__(self) -> None:
        assignment = tuple(self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != len(self.from_space):
            raise SphereError("point map must assign every point")
        if sorted(assignment) != sorted(self.to_space.points):
            raise SphereError("point map is not a bijection")

    @classmethod
    def from_mapping(cls, from_space: SpaceModel, to_space: SpaceModel, mapping: Mapping[str, str]) -> PointMap:
        if set(mapping) != set(from_space.points):
            raise SphereError("point map must assign every point exactly once")
        return cls(from_space, to_space, tuple(mapping[p] for p in from_space.points))

    @classmethod
    def identity(cls, space: SpaceModel) -> PointMap:
        return cls(space, space, space.points)

    def __call__(self, point: str) -> str:
        return self.assignment[self.from_space.index(point)]

    def inverse(self) -> PointMap:
        back = {target: source for source, target in zip(self.from_space.points, self.assignment)}
        return PointMap.from_mapping(self.to_space, self.from_space, back)

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.from_space.points, self.assignment))

    def index_map(self) -> tuple[int, ...]:
        """``to_space`` index of each ``from_space`` point."""
        return tuple(self.to_space.index(p) for p in self.assignment)


def all_point_maps(from_space: SpaceModel, to_space: SpaceModel) -> list[PointMap]:
    """Every bijection, in lexicographic order of target indices."""
    if len(from_space) != len(to_space):
        return []
    return [
        PointMap(from_space, to_space, tuple(to_space.points[i] for i in perm))
        for perm in itertools.permutations(range(len(to_space)))
    ]


@dataclass(frozen=True)
class SphereMap:
    """Total table over the domain grid sphere; ``images[i]`` is the image of ``domain_functions()[i]``."""

    domain_space: SpaceModel
    codomain_space: SpaceModel
    grid: GridSpec
    images: tuple[SphereFn, ...]
    _lookup: Mapping[SphereFn, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        domain = enumerate_grid_sphere(self.domain_space, self.grid)
        if len(images) != len(domain):
            raise SphereError(
                f"table must cover all {len(domain)} grid sphere functions, got {len(images)}"
            )
        for img in images:
            if img.space != self.codomain_space:
                raise SpaceMismatchError("space mismatch: image outside the codomain")
        object.__setattr__(self, "_lookup", {f: i for i, f in enumerate(domain)})

    @classmethod
    def from_pairs(
        cls,
        domain_space: SpaceModel,
        codomain_space: SpaceModel,
        grid: GridSpec,
        pairs: Iterable[tuple[SphereFn, SphereFn]],
    ) -> SphereMap:
        table: dict[SphereFn, SphereFn] = {}
        for f, u in pairs:
            if f.space != domain_space:
                raise SpaceMismatchError("space mismatch: table input outside the domain")
            if f in table and table[f] != u:
                raise SphereError(f"conflicting table entries for {f!r}")
            table[f] = u
        domain = enumerate_grid_sphere(domain_space, grid)
        if set(table) != set(domain):
            missing = [f for f in domain if f not in table]
            extra = [f for f in table if f not in set(domain)]
            raise SphereError(
                f"table must be exactly the grid sphere: {len(missing)} missing, {len(extra)} off-grid"
            )
        return cls(domain_space, codomain_space, grid, tuple(table[f] for f in domain))

    def domain_functions(self) -> tuple[SphereFn, ...]:
        return enumerate_grid_sphere(self.domain_space, self.grid)

    def codomain_functions(self) -> tuple[SphereFn, ...]:
        return enumerate_grid_sphere(self.codomain_space, self.grid)

    def index_of(self, f: SphereFn) -> int:
        try:
            return self._lookup[f]
        except KeyError:
            raise SphereError(f"{f!r} is outside the table domain") from None

    def __call__(self, f: SphereFn) -> SphereFn:
        return self.images[self.index_of(f)]

    def __len__(self) -> int:
        return len(self.images)

    def pairs(self) -> Iterable[tuple[SphereFn, SphereFn]]:
        return zip(self.domain_functions(), self.images)

    def is_bijective(self) -> bool:
        """Injective with image exactly the codomain grid sphere."""
        if len(set(self.images)) != len(self.images):
            return False
        return set(self.images) == set(self.codomain_functions())

    def inverse(self) -> SphereMap:
        if not self.is_bijective():
            raise SphereError("only a bijective table can be inverted")
        return SphereMap.from_pairs(
            self.codomain_space, self.domain_space, self.grid, ((u, f) for f, u in self.pairs())
        )


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    counterexample: Any = None

    def __post_init__(self) -> None:
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.counterexample is None:
            raise ValueError("a failed check must carry a counterexample")

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "status": self.status, "counterexample": self.counterexample}


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, status: str, counterexample: Any = None) -> Check:
        check = Check(name, status, counterexample)
        self.checks.append(check)
        return check

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.checks.extend(other.checks)
        return self

    @property
    def summary(self) -> dict[str, int]:
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            counts[c.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def status_of(self, name: str) -> str:
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict[str, Any]:
        return {"checks": [c.to_json() for c in self.checks], "summary": self.summary}


def _coded_distances(fns: Sequence[SphereFn], others: Sequence[SphereFn]):
    coded, denom = kernels.encode([f.values for f in fns] + [g.values for g in others])
    k = len(fns)
    return kernels.distance_matrix(coded[:k]), kernels.distance_matrix(coded[k:]), denom


def check_isometry(phi: SphereMap) -> VerificationReport:
    """Exact distance preservation over every pair of grid functions."""
    report = VerificationReport()
    domain = phi.domain_functions()
    da, db, denom = _coded_distances(domain, phi.images)
    bad = kernels.first_distortion(da, db)
    if bad is None:
        report.add("isometry", PASS)
    else:
        i, j = bad
        report.add(
            "isometry",
            FAIL,
            {
                "f": fn_payload(domain[i].values, phi.domain_space),
                "g": fn_payload(domain[j].values, phi.domain_space),
                "distance": format_fraction(Fraction(da[i][j], denom)),
                "image_distance": format_fraction(Fraction(db[i][j], denom)),
            },
        )
    return report


def check_ball_transport(phi: SphereMap, f: SphereFn, *, isometric: bool | None = None) -> VerificationReport:
    """The image of the unit ball around ``f`` is the unit ball around ``phi(f)``.

    Skipped unless ``phi`` is a bijective isometry. ``isometric`` lets a
    caller that already ran :func:`check_isometry` skip the rerun.
    """
    name = "ball-transport"
    report = VerificationReport()
    if not phi.is_bijective():
        report.add(name, SKIPPED, {"reason": "oracle is not bijective onto the codomain grid sphere"})
        return report
    if isometric is None:
        isometric = check_isometry(phi).ok
    if not isometric:
        report.add(name, SKIPPED, {"reason": "oracle is not an isometry"})
        return report
    image = phi(f)
    pushed = {phi(h) for h in phi.domain_functions() if in_d_definition(f, h)}
    ball = {u for u in phi.codomain_functions() if in_d_definition(image, u)}
    if pushed == ball:
        report.add(name, PASS)
        return report
    cod = phi.codomain_space
    only_pushed = [u for u in phi.codomain_functions() if u in pushed and u not in ball]
    only_ball = [u for u in phi.codomain_functions() if u in ball and u not in pushed]
    report.add(
        name,
        FAIL,
        {
            "f": fn_payload(f.values, phi.domain_space),
            "image_not_in_ball": [fn_payload(u.values, cod) for u in only_pushed[:1]],
            "ball_not_in_image": [fn_payload(u.values, cod) for u in only_ball[:1]],
        },
    )
    return report


def composition_operator(sigma: PointMap, grid: GridSpec) -> SphereMap:
    """``f -> f o sigma`` for ``sigma: Y -> X``; the table runs ``X -> Y``."""
    domain_space, codomain_space = sigma.to_space, sigma.from_space
    idx = sigma.index_map()
    images = tuple(
        SphereFn(codomain_space, tuple(f.values[i] for i in idx))
        for f in enumerate_grid_sphere(domain_space, grid)
    )
    return SphereMap(domain_space, codomain_space, grid, images)


def identity_map(space: SpaceModel, grid: GridSpec) -> SphereMap:
    return SphereMap(space, space, grid, enumerate_grid_sphere(space, grid))


@dataclass(frozen=True)
class ExtractionResult:
    sigma: PointMap
    tau: PointMap
    # per domain point: how many peak functions were consumed before the
    # running intersection first became a singleton
    family_needed: dict[str, int]
    # candidate sets from the two-valued peak family only
    coarse_candidates: dict[str, tuple[str, ...]]

    @property
    def coarse_agrees(self) -> bool:
        return all(cands == (self.tau(x),) for x, cands in self.coarse_candidates.items())


def _running_intersection(images: Sequence[SphereFn]) -> tuple[tuple[str, ...], int]:
    space = images[0].space
    common = set(space.points)
    needed = 0
    for k, u in enumerate(images, start=1):
        common.intersection_update(p for p, v in u.items() if v == 1)
        if needed == 0 and len(common) == 1:
            needed = k
    ordered = tuple(p for p in space.points if p in common)
    return ordered, needed or len(images)


def extract(phi: SphereMap, *, verify: bool = True) -> ExtractionResult:
    """Recover ``sigma`` from a bijective isometry table.

    For each domain point ``x`` the images of the peak family at ``x`` must
    share exactly one common peak point ``tau(x)``; ``sigma`` is the inverse
    of ``tau``. With ``verify`` the composition equality ``phi(f)(y) =
    f(sigma(y))`` is then checked on every grid ``f`` and every ``y``.
    """
    if not phi.is_bijective():
        raise ExtractionError("oracle is not a bijection onto the codomain grid sphere")
    if len(phi.domain_space) != len(phi.codomain_space):
        raise ExtractionError("domain and codomain have different sizes")
    X, Y = phi.domain_space, phi.codomain_space
    coarse = GridSpec(1)
    tau_targets: list[str] = []
    needed: dict[str, int] = {}
    coarse_cands: dict[str, tuple[str, ...]] = {}
    for x in X.points:
        images = [phi(f) for f in peak_family(X, x, phi.grid)]
        cands, k = _running_intersection(images)
        if not cands:
            raise ExtractionError(f"empty intersection at {x}", {"point": x})
        if len(cands) > 1:
            raise ExtractionError(
                f"non-singleton intersection at {x}", {"point": x, "candidates": list(cands)}
            )
        tau_targets.append(cands[0])
        needed[x] = k
        coarse_images = [phi(f) for f in peak_family(X, x, coarse)]
        coarse_cands[x] = intersect_max_sets(coarse_images).ordered()
    if sorted(tau_targets) != sorted(Y.points):
        raise ExtractionError(
            "peak points do not form a bijection", {"tau": dict(zip(X.points, tau_targets))}
        )
    tau = PointMap(X, Y, tuple(tau_targets))
    sigma = tau.inverse()
    if verify:
        bad = _composition_violation(phi, sigma)
        if bad is not None:
            raise ExtractionError("composition equality violated", bad)
    return ExtractionResult(sigma, tau, needed, coarse_cands)


def extract_point_map(phi: SphereMap) -> PointMap:
    return extract(phi).sigma


def _composition_violation(phi: SphereMap, sigma: PointMap) -> dict[str, Any] | None:
    idx = sigma.index_map()
    for f, u in phi.pairs():
        for j, y in enumerate(phi.codomain_space.points):
            if u.values[j] != f.values[idx[j]]:
                return {
                    "f": fn_payload(f.values, phi.domain_space),
                    "y": y,
                    "image_value": format_fraction(u.values[j]),
                    "composed_value": format_fraction(f.values[idx[j]]),
                }
    return None


def check_composition_equality(phi: SphereMap, sigma: PointMap) -> VerificationReport:
    report = VerificationReport()
    bad = _composition_violation(phi, sigma)
    report.add("composition-equality", PASS if bad is None else FAIL, bad)
    return report


@dataclass(frozen=True)
class LinearExtension:
    """``f -> f o sigma`` on all rational functions, not only sphere members."""

    sigma: PointMap

    def __call__(self, values: Mapping[str, object] | Sequence[object]) -> tuple[Fraction, ...]:
        X = self.sigma.to_space
        if isinstance(values, Mapping):
            if set(values) != set(X.points):
                raise SphereError("function must be given on every domain point")
            vec = [to_fraction(values[p]) for p in X.points]
        else:
            vec = [to_fraction(v) for v in values]
            if len(vec) != len(X):
                raise SphereError(f"expected {len(X)} values, got {len(vec)}")
        return tuple(vec[i] for i in self.sigma.index_map())

    def inverse(self) -> LinearExtension:
        return LinearExtension(self.sigma.inverse())

    @staticmethod
    def norm(values: Sequence[Fraction]) -> Fraction:
        return sup_norm(values)

    def descriptor(self) -> dict[str, Any]:
        return {"type": "composition", "sigma": self.sigma.as_dict()}


def extend_linear(sigma: PointMap) -> LinearExtension:
    return LinearExtension(sigma)


def check_uniqueness(sigma: PointMap, grid: GridSpec) -> VerificationReport:
    """No other point bijection induces the same action on the grid sphere."""
    report = VerificationReport()
    domain = enumerate_grid_sphere(sigma.to_space, grid)
    own = sigma.index_map()
    rivals = []
    for tau in all_point_maps(sigma.from_space, sigma.to_space):
        if tau == sigma:
            continue
        other = tau.index_map()
        if all(tuple(f.values[i] for i in own) == tuple(f.values[i] for i in other) for f in domain):
            rivals.append(tau.as_dict())
    report.add("unique-extension", PASS if not rivals else FAIL, {"rivals": rivals} if rivals else None)
    return report
