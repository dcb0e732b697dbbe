"""JSON documents for systems and labelled spaces.

System document::

    {
      "ground_set": ["v1", "v2"],
      "sets": "powerset",                      # or a list of vertex lists
      "alphabet": ["a"],
      "theta": {"a": {"[v1]": ["v2"]}},        # atom -> image, missing atoms go to ∅
      "ideals": {"a": {"generators": [["v2"]]}},   # missing: F_a, "full": B
      "J": "all_regular"                       # | "empty" | {"generators": [...]}
    }

Labelled space document::

    {"vertices": [...], "labels": [...], "edges": [[src, tgt, label], ...],
     "family": "powerset" | [[...], ...], "ideals": {label: [...]}}
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from core.boolean_algebra import (
    FiniteGBA,
    GbaIdeal,
    bit_indices,
    ideal_generated,
    make_morphism,
    member_from_names,
    validate_gba,
    whole_ideal,
    zero_ideal,
)
from core.dynamical_system import DynamicalSystem, validate_system
from core.errors import GbdsError, ParseError
from core.stone_dual import LabelledSpace, VertexFamily, validate_labelled_space

logger = logging.getLogger(__name__)

_KEY = re.compile(r"^\[(.*)\]$")

PathLike = Union[str, Path]


def _read(path: PathLike) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", exc.msg) from exc
    if not isinstance(data, dict):
        raise ParseError("document", "top level must be an object")
    return data


def _names(value: Any, where: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(where, "expected a list of vertex names")
    return value


def _member(gba: FiniteGBA, value: Any, where: str) -> int:
    names = _names(value, where)
    try:
        return gba.member(names)
    except GbdsError as exc:
        raise ParseError(where, str(exc)) from exc


def _generated(gba: FiniteGBA, entry: Any, where: str) -> GbaIdeal:
    if not isinstance(entry, dict) or "generators" not in entry or not isinstance(entry["generators"], list):
        raise ParseError(where, 'expected {"generators": [...]}')
    gens = [_member(gba, g, f"{where}.generators[{i}]") for i, g in enumerate(entry["generators"])]
    return ideal_generated(gba, gens)


def system_from_dict(data: Mapping[str, Any]) -> DynamicalSystem:
    ground = _names(data.get("ground_set"), "ground_set")
    sets = data.get("sets", "powerset")
    if sets == "powerset":
        gba = FiniteGBA.powerset(ground)
    elif isinstance(sets, list):
        gba = validate_gba(ground, [_names(s, f"sets[{i}]") for i, s in enumerate(sets)])
    else:
        raise ParseError("sets", 'expected "powerset" or a list of vertex lists')

    alphabet = data.get("alphabet", [])
    if not isinstance(alphabet, list) or not all(isinstance(a, str) and a for a in alphabet):
        raise ParseError("alphabet", "expected a list of letters")

    theta_doc = data.get("theta", {})
    if not isinstance(theta_doc, dict):
        raise ParseError("theta", "expected an object")
    theta = {}
    for letter, table in theta_doc.items():
        where = f"theta.{letter}"
        if letter not in alphabet:
            raise ParseError(where, "letter is not in the alphabet")
        if not isinstance(table, dict):
            raise ParseError(where, "expected an object keyed by atoms")
        images = {}
        for key, image in table.items():
            match = _KEY.match(key)
            if match is None:
                raise ParseError(where, f"atom key {key!r} is not of the form [v ...]")
            try:
                atom = member_from_names(ground, match.group(1).split())
            except GbdsError as exc:
                raise ParseError(where, str(exc)) from exc
            if atom not in gba.atoms:
                raise ParseError(where, f"{key} is not an atom")
            images[atom] = member_from_names(ground, _names(image, f"{where}.{key}"))
        theta[letter] = make_morphism(gba, gba, images, letter)

    ideals_doc = data.get("ideals", {})
    if not isinstance(ideals_doc, dict):
        raise ParseError("ideals", "expected an object")
    ideals = {}
    for letter, entry in ideals_doc.items():
        if letter not in alphabet:
            raise ParseError(f"ideals.{letter}", "letter is not in the alphabet")
        ideals[letter] = whole_ideal(gba) if entry == "full" else _generated(gba, entry, f"ideals.{letter}")

    j_doc = data.get("J", "all_regular")
    if j_doc == "all_regular":
        relative = None
    elif j_doc == "empty":
        relative = zero_ideal(gba)
    else:
        relative = _generated(gba, j_doc, "J")

    return validate_system(gba, alphabet, theta, ideals, relative)


def parse_system(path: PathLike) -> DynamicalSystem:
    system = system_from_dict(_read(path))
    logger.info("loaded system from %s", path)
    return system


def _names_of(gba: FiniteGBA, member: int) -> List[str]:
    return [gba.ground[i] for i in bit_indices(member)]


def serialize_system(system: DynamicalSystem) -> Dict[str, Any]:
    """Canonical document: every atom listed in theta, ideals by their top."""
    gba = system.algebra
    powerset = gba.atoms == FiniteGBA.powerset(gba.ground).atoms
    doc: Dict[str, Any] = {
        "ground_set": list(gba.ground),
        "sets": "powerset" if powerset else [_names_of(gba, m) for m in gba.members],
        "alphabet": list(system.alphabet),
        "theta": {
            a: {gba.format(c): _names_of(gba, system.theta[a](c)) for c in gba.atoms}
            for a in system.alphabet
        },
        "ideals": {a: {"generators": [_names_of(gba, system.ideals[a].top)]} for a in system.alphabet},
    }
    if system.relative_ideal.top == system.regular_sets.top:
        doc["J"] = "all_regular"
    elif system.relative_ideal.top == 0:
        doc["J"] = "empty"
    else:
        doc["J"] = {"generators": [_names_of(gba, system.relative_ideal.top)]}
    return doc


def write_system(system: DynamicalSystem, path: PathLike) -> str:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(serialize_system(system), f, indent=2, ensure_ascii=False)
    return str(Path(path))


def write_labelled_space(space: LabelledSpace, path: PathLike) -> str:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(serialize_labelled_space(space), f, indent=2, ensure_ascii=False)
    return str(Path(path))


def labelled_space_from_dict(data: Mapping[str, Any]) -> LabelledSpace:
    vertices = tuple(_names(data.get("vertices"), "vertices"))
    edges = []
    for i, edge in enumerate(data.get("edges", [])):
        if not isinstance(edge, list) or len(edge) != 3 or not all(isinstance(x, str) for x in edge):
            raise ParseError(f"edges[{i}]", "expected [source, target, label]")
        edges.append(tuple(edge))
    labels = data.get("labels")
    if labels is None:
        labels = sorted({label for _, _, label in edges})
    labels = tuple(_names(list(labels), "labels"))

    def mask(value: Any, where: str) -> int:
        try:
            return member_from_names(vertices, _names(value, where))
        except GbdsError as exc:
            raise ParseError(where, str(exc)) from exc

    family_doc = data.get("family", "powerset")
    if family_doc == "powerset":
        family = VertexFamily.of(FiniteGBA.powerset(vertices).members)
    elif isinstance(family_doc, list):
        family = VertexFamily.of(mask(s, f"family[{i}]") for i, s in enumerate(family_doc))
    else:
        raise ParseError("family", 'expected "powerset" or a list of vertex lists')
    ideals_doc = data.get("ideals", {})
    if not isinstance(ideals_doc, dict):
        raise ParseError("ideals", "expected an object")
    ideals = {label: mask(value, f"ideals.{label}") for label, value in ideals_doc.items()}
    space = LabelledSpace(vertices, labels, tuple(edges), family, ideals)
    return validate_labelled_space(space)


def parse_labelled_space(path: PathLike) -> LabelledSpace:
    return labelled_space_from_dict(_read(path))


def serialize_labelled_space(space: LabelledSpace) -> Dict[str, Any]:
    def names(member: int) -> List[str]:
        return [space.vertices[i] for i in bit_indices(member)]

    return {
        "vertices": list(space.vertices),
        "labels": list(space.labels),
        "edges": [list(edge) for edge in space.edges],
        "family": [names(m) for m in space.family.sets],
        "ideals": {label: names(top) for label, top in space.ideals.items()},
    }


__all__ = [
    "parse_system",
    "system_from_dict",
    "serialize_system",
    "write_system",
    "parse_labelled_space",
    "labelled_space_from_dict",
    "serialize_labelled_space",
    "write_labelled_space",
]
