"""JSON forms for sphere functions, point sets, oracles and reports.

Rationals travel as ``"p/q"`` strings in lowest terms with ``q > 0``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any
from collections.abc import Mapping, Sequence

from .extraction import PointMap, SphereMap, composition_operator
from .lattice import GridSpec, SpaceModel, SphereError, SphereFn, format_fraction
from .setcalc import PointSet

__all__ = [
    "MalformedInput",
    "parse_rational",
    "sphere_fn_to_json",
    "sphere_fn_from_json",
    "point_set_to_json",
    "point_set_from_json",
    "sphere_map_to_json",
    "sphere_map_from_json",
    "load_sphere_map",
    "dumps",
]

_RATIONAL = re.compile(r"^-?\d+/\d+$")


class MalformedInput(SphereError):
    pass


def parse_rational(text: Any) -> Fraction:
    """Parse a canonical ``"p/q"`` string; anything else is malformed."""
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise MalformedInput(f"expected a 'p/q' rational string, got {text!r}")
    num, den = (int(x) for x in text.split("/"))
    if den == 0:
        raise MalformedInput(f"zero denominator in {text!r}")
    value = Fraction(num, den)
    if format_fraction(value) != text:
        raise MalformedInput(f"rational {text!r} is not in lowest terms")
    return value


def _natural_key(label: str) -> tuple:
    return tuple(int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", label))


def _space(obj: Any, what: str) -> SpaceModel:
    if not isinstance(obj, list) or not all(isinstance(p, str) for p in obj):
        raise MalformedInput(f"{what} must be a list of point labels")
    try:
        return SpaceModel(tuple(obj))
    except SphereError as exc:
        raise MalformedInput(f"{what}: {exc}") from None


def sphere_fn_to_json(f: SphereFn) -> dict[str, Any]:
    return {
        "space": list(f.space.points),
        "values": {p: format_fraction(v) for p, v in f.items()},
    }


def _values(space: SpaceModel, obj: Any) -> tuple[Fraction, ...]:
    if isinstance(obj, Mapping) and "values" in obj:
        if "space" in obj and list(obj["space"]) != list(space.points):
            raise MalformedInput("function space does not match the declared space")
        obj = obj["values"]
    if isinstance(obj, Mapping):
        if set(obj) != set(space.points):
            raise MalformedInput("function must give a value on every point and nowhere else")
        return tuple(parse_rational(obj[p]) for p in space.points)
    if isinstance(obj, Sequence) and not isinstance(obj, str):
        if len(obj) != len(space):
            raise MalformedInput(f"expected {len(space)} values")
        return tuple(parse_rational(x) for x in obj)
    raise MalformedInput(f"cannot read a function from {obj!r}")


def _fn(space: SpaceModel, obj: Any) -> SphereFn:
    values = _values(space, obj)
    try:
        return SphereFn(space, values)
    except SphereError as exc:
        raise MalformedInput(str(exc)) from None


def sphere_fn_from_json(obj: Any) -> SphereFn:
    if not isinstance(obj, Mapping) or "space" not in obj or "values" not in obj:
        raise MalformedInput("a sphere function needs 'space' and 'values'")
    return _fn(_space(obj["space"], "space"), obj["values"])


def point_set_to_json(s: PointSet) -> dict[str, Any]:
    return {"space": list(s.space.points), "members": list(s.ordered())}


def point_set_from_json(obj: Any) -> PointSet:
    if not isinstance(obj, Mapping) or "space" not in obj or "members" not in obj:
        raise MalformedInput("a point set needs 'space' and 'members'")
    space = _space(obj["space"], "space")
    try:
        return PointSet(space, frozenset(obj["members"]))
    except SphereError as exc:
        raise MalformedInput(str(exc)) from None


def sphere_map_to_json(phi: SphereMap) -> dict[str, Any]:
    dom, cod = phi.domain_space, phi.codomain_space
    return {
        "type": "table",
        "domain": list(dom.points),
        "codomain": list(cod.points),
        "m": phi.grid.m,
        "map": [
            [{p: format_fraction(v) for p, v in f.items()}, {p: format_fraction(v) for p, v in u.items()}]
            for f, u in phi.pairs()
        ],
    }


def _grid(obj: Mapping[str, Any]) -> GridSpec:
    m = obj.get("m")
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise MalformedInput("'m' must be a positive integer")
    return GridSpec(m)


def sphere_map_from_json(obj: Any) -> SphereMap:
    """Load a table oracle, expanding the composition shorthand."""
    if not isinstance(obj, Mapping):
        raise MalformedInput("oracle must be a JSON object")
    kind = obj.get("type")
    grid = _grid(obj)
    if kind == "composition":
        sigma_obj = obj.get("sigma")
        if not isinstance(sigma_obj, Mapping) or not sigma_obj:
            raise MalformedInput("'sigma' must be a non-empty object")
        if not all(isinstance(v, str) for v in sigma_obj.values()):
            raise MalformedInput("'sigma' targets must be point labels")
        codomain = _space(obj.get("codomain", sorted(sigma_obj, key=_natural_key)), "codomain")
        domain = _space(obj.get("domain", sorted(sigma_obj.values(), key=_natural_key)), "domain")
        try:
            sigma = PointMap.from_mapping(codomain, domain, sigma_obj)
        except SphereError as exc:
            raise MalformedInput(f"sigma: {exc}") from None
        return composition_operator(sigma, grid)
    if kind == "table":
        domain = _space(obj.get("domain"), "domain")
        codomain = _space(obj.get("codomain"), "codomain")
        entries = obj.get("map")
        if not isinstance(entries, list) or not entries:
            raise MalformedInput("'map' must be a non-empty list of [input, output] pairs")
        pairs = []
        for entry in entries:
            if not isinstance(entry, list) or len(entry) != 2:
                raise MalformedInput("each map entry must be an [input, output] pair")
            pairs.append((_fn(domain, entry[0]), _fn(codomain, entry[1])))
        try:
            return SphereMap.from_pairs(domain, codomain, grid, pairs)
        except SphereError as exc:
            raise MalformedInput(str(exc)) from None
    raise MalformedInput("oracle 'type' must be 'table' or 'composition'")


def load_sphere_map(path: str | Path) -> SphereMap:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from None
    return sphere_map_from_json(obj)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
