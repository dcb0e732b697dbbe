"""Stone duality between Boolean dynamical systems and labelled spaces.

Filters of a finite algebra are principal, so a filter is kept through its
generator ``w`` (the filter is ``{y : y ⊇ w}``).  ``V_x`` is the set of
filters containing ``x``, that is ``{F_w : ∅ ≠ w ⊆ x}``.  Vertex sets are
bit patterns over the ordered vertex tuple.

The family ``{V_x}`` is closed under intersection but not under union, so
the family of a labelled space is treated as a lattice under inclusion:
joins and relative complements are the lattice operations, and "normal"
means that lattice is a generalized Boolean algebra.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .boolean_algebra import FiniteGBA, GbaIdeal, Member, bit_indices, canonical_key, format_member, make_morphism
from .dynamical_system import DynamicalSystem, validate_system
from .errors import NotAMember, UnknownLabel, UnknownVertex, ValidationFailure

logger = logging.getLogger(__name__)

Edge = Tuple[str, str, str]


@dataclass(frozen=True, order=True)
class Filter:
    generator: Member

    def __contains__(self, member: Member) -> bool:
        return member & self.generator == self.generator

    def name(self, gba: FiniteGBA) -> str:
        return f"F{gba.format(self.generator)}"


def is_filter(gba: FiniteGBA, family: Iterable[Member]) -> bool:
    """Nonempty, proper, upward closed and closed under meets."""
    members = set(family)
    if not members or 0 in members or any(m not in gba for m in members):
        return False
    for x in members:
        for y in gba.members:
            if y & x == x and y not in members:
                return False
        for y in members:
            if x & y not in members:
                return False
    return True


def filters(gba: FiniteGBA, check: bool = True) -> List[Filter]:
    found = [Filter(w) for w in gba.members if w]
    if check:
        for f in found:
            up = [y for y in gba.members if y in f]
            if not is_filter(gba, up):
                raise ValidationFailure("filter", f.generator, f.name(gba))
    return found


def v_set(gba: FiniteGBA, x: Member) -> FrozenSet[Filter]:
    gba.require(x)
    return frozenset(Filter(w) for w in gba.members_below(x) if w)


@dataclass(frozen=True)
class VertexFamily:
    """A family of vertex sets read as a lattice under inclusion."""

    sets: Tuple[Member, ...]

    @classmethod
    def of(cls, sets: Iterable[Member]) -> "VertexFamily":
        return cls(tuple(sorted(set(sets), key=canonical_key)))

    def __contains__(self, member: object) -> bool:
        return member in self._index

    @cached_property
    def _index(self) -> FrozenSet[Member]:
        return frozenset(self.sets)

    @cached_property
    def atoms(self) -> Tuple[Member, ...]:
        nonempty = [m for m in self.sets if m]
        return tuple(m for m in nonempty if not any(n != m and n & m == n for n in nonempty))

    @cached_property
    def top(self) -> Member:
        top = 0
        for m in self.sets:
            top |= m
        return top

    def atom_set(self, member: Member) -> FrozenSet[int]:
        return frozenset(i for i, atom in enumerate(self.atoms) if atom & member == atom)

    @cached_property
    def _by_atoms(self) -> Dict[FrozenSet[int], Member]:
        return {self.atom_set(m): m for m in self.sets}

    def normal_violation(self) -> Optional[Tuple[Member, Member]]:
        """A witness against the family being a generalized Boolean algebra, or None."""
        if 0 not in self:
            return 0, 0
        seen: Dict[FrozenSet[int], Member] = {}
        for m in self.sets:
            key = self.atom_set(m)
            if key in seen:
                return seen[key], m
            seen[key] = m
        if len(seen) != 1 << len(self.atoms):
            missing = self.top
            return missing, missing
        for m in self.sets:
            for n in self.sets:
                if (m & n == m) != (self.atom_set(m) <= self.atom_set(n)):
                    return m, n
        return None

    def join(self, x: Member, y: Member) -> Member:
        return self._by_atoms[self.atom_set(x) | self.atom_set(y)]

    def meet(self, x: Member, y: Member) -> Member:
        return self._by_atoms[self.atom_set(x) & self.atom_set(y)]

    def difference(self, x: Member, y: Member) -> Member:
        return self._by_atoms[self.atom_set(x) - self.atom_set(y)]


@dataclass(frozen=True)
class LabelledSpace:
    vertices: Tuple[str, ...]
    labels: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    family: VertexFamily
    ideals: Mapping[str, Member] = field(hash=False, default_factory=dict)

    @cached_property
    def _vertex_bit(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _out(self) -> Dict[Tuple[int, str], Member]:
        table: Dict[Tuple[int, str], Member] = {}
        for source, target, label in self.edges:
            key = (self._vertex_bit[source], label)
            table[key] = table.get(key, 0) | (1 << self._vertex_bit[target])
        return table

    def mask(self, names: Iterable[str]) -> Member:
        out = 0
        for name in names:
            if name not in self._vertex_bit:
                raise UnknownVertex(name)
            out |= 1 << self._vertex_bit[name]
        return out

    def format(self, member: Member) -> str:
        return format_member(self.vertices, member)

    def range(self, A: Member, label: str) -> Member:
        """r(A, a): ranges of the a-labelled edges leaving A."""
        if A not in self.family:
            raise NotAMember(A, self.format(A))
        if label not in self.labels:
            raise UnknownLabel(label)
        out = 0
        for i in bit_indices(A):
            out |= self._out.get((i, label), 0)
        return out

    def minimal_ideal_top(self, label: str) -> Member:
        return self.range(self.family.top, label)

    def ideal_top(self, label: str) -> Member:
        return self.ideals.get(label, self.minimal_ideal_top(label))


def validate_labelled_space(space: LabelledSpace) -> LabelledSpace:
    for source, target, label in space.edges:
        space.mask([source, target])
        if label not in space.labels:
            raise UnknownLabel(label)
    family = space.family
    if any(m >> len(space.vertices) for m in family.sets):
        raise ValidationFailure("family", family.top, "set outside the vertex set")
    witness = family.normal_violation()
    if witness is not None:
        raise ValidationFailure("normal", witness,
                                f"{space.format(witness[0])}, {space.format(witness[1])}")
    for A in family.sets:
        for B in family.sets:
            if A & B not in family:
                raise ValidationFailure("meet", (A, B), f"{space.format(A)} ∩ {space.format(B)}")
    for label in space.labels:
        ranges = {A: space.range(A, label) for A in family.sets}
        for A, r in ranges.items():
            if r not in family:
                raise ValidationFailure("accommodating", (A, label), f"r({space.format(A)}, {label})")
        for A in family.sets:
            for B in family.sets:
                if ranges[A & B] != ranges[A] & ranges[B]:
                    raise ValidationFailure("WLR", (A, B), f"{space.format(A)}, {space.format(B)} under {label}")
        top = space.ideal_top(label)
        if top not in family:
            raise ValidationFailure("ideal", (label, top), f"ideal of {label} is not in the family")
        minimal = space.minimal_ideal_top(label)
        if minimal & ~top:
            raise ValidationFailure("ideal", (label, minimal), f"F_{label} is not inside the ideal of {label}")
    return space


# --- GBDS -> labelled space ----------------------------------------------

def stone_graph(system: DynamicalSystem) -> LabelledSpace:
    gba = system.algebra
    points = filters(gba)
    vertices = tuple(f.name(gba) for f in points)
    edges: List[Edge] = []
    for f in points:
        for a in system.alphabet:
            for w in gba.members_below(system.theta[a](f.generator)):
                if w:
                    edges.append((f.name(gba), Filter(w).name(gba), a))
    embedding = stone_embedding(system)
    family = VertexFamily.of(embedding.values())
    ideals = {a: embedding[system.ideals[a].top] for a in system.alphabet}
    space = LabelledSpace(vertices, system.alphabet, tuple(edges), family, ideals)
    logger.info("stone graph: %d vertices, %d edges", len(vertices), len(edges))
    return validate_labelled_space(space)


def stone_embedding(system: DynamicalSystem) -> Dict[Member, Member]:
    """x -> V_x as vertex bit patterns (vertex order = canonical order of nonempty members)."""
    gba = system.algebra
    position = {w: i for i, w in enumerate(w for w in gba.members if w)}
    return {x: sum(1 << position[w] for w in gba.members_below(x) if w) for x in gba.members}


# --- labelled space -> GBDS ----------------------------------------------

def _atom_name(space: LabelledSpace, atom: Member) -> str:
    return "+".join(space.vertices[i] for i in bit_indices(atom))


def family_coordinates(space: LabelledSpace) -> Dict[Member, Member]:
    """Family member -> bit pattern over the family atoms."""
    return {m: sum(1 << i for i in space.family.atom_set(m)) for m in space.family.sets}


def labelled_to_gbds(space: LabelledSpace) -> DynamicalSystem:
    validate_labelled_space(space)
    family = space.family
    ground = tuple(_atom_name(space, atom) for atom in family.atoms)
    gba = FiniteGBA.powerset(ground)
    coords = family_coordinates(space)
    theta = {}
    for label in space.labels:
        images = {1 << i: coords[space.range(atom, label)] for i, atom in enumerate(family.atoms)}
        morphism = make_morphism(gba, gba, images, label)
        for m in family.sets:
            if morphism(coords[m]) != coords[space.range(m, label)]:
                raise ValidationFailure("morphism", (m, label), f"r({space.format(m)}, {label}) is not a join")
        theta[label] = morphism
    ideals = {label: GbaIdeal(gba, coords[space.ideal_top(label)]) for label in space.labels}
    return validate_system(gba, space.labels, theta, ideals)


# --- isomorphism ----------------------------------------------------------

def _atom_graph(system: DynamicalSystem, relative: bool = True) -> nx.DiGraph:
    graph = nx.DiGraph()
    for c in system.algebra.atoms:
        ideals = frozenset(a for a in system.alphabet if c & system.ideals[a].top)
        graph.add_node(c, ideals=ideals, relative=relative and bool(c & system.relative_ideal.top))
    for a in system.alphabet:
        for c in system.algebra.atoms:
            for d in system.algebra.atoms_below(system.theta[a](c)):
                if graph.has_edge(c, d):
                    graph[c][d]["labels"] = graph[c][d]["labels"] | {a}
                else:
                    graph.add_edge(c, d, labels=frozenset({a}))
    return graph


def _extend(system: DynamicalSystem, atom_map: Mapping[Member, Member]) -> Dict[Member, Member]:
    out = {}
    for m in system.algebra.members:
        image = 0
        for c in system.algebra.atoms_below(m):
            image |= atom_map[c]
        out[m] = image
    return out


def is_isomorphism(left: DynamicalSystem, right: DynamicalSystem, member_map: Mapping[Member, Member],
                   relative: bool = True) -> bool:
    """A bijection of members preserving the set operations, theta, the ideals and J."""
    if left.alphabet != right.alphabet:
        return False
    members = left.algebra.members
    if set(member_map) != set(members) or sorted(member_map.values()) != sorted(right.algebra.members):
        return False
    for x in members:
        for y in members:
            if (member_map[x | y] != member_map[x] | member_map[y]
                    or member_map[x & y] != member_map[x] & member_map[y]
                    or member_map[x & ~y] != member_map[x] & ~member_map[y]):
                return False
    for a in left.alphabet:
        if member_map[left.ideals[a].top] != right.ideals[a].top:
            return False
        for x in members:
            if member_map[left.theta[a](x)] != right.theta[a](member_map[x]):
                return False
    return not relative or member_map[left.relative_ideal.top] == right.relative_ideal.top


def find_isomorphism(left: DynamicalSystem, right: DynamicalSystem,
                     relative: bool = True) -> Optional[Dict[Member, Member]]:
    """Member bijection left -> right, found by matching labelled atom graphs."""
    if left.alphabet != right.alphabet or len(left.algebra.atoms) != len(right.algebra.atoms):
        return None
    matcher = DiGraphMatcher(
        _atom_graph(left, relative), _atom_graph(right, relative),
        node_match=lambda p, q: p == q,
        edge_match=lambda p, q: p["labels"] == q["labels"],
    )
    for mapping in matcher.isomorphisms_iter():
        candidate = _extend(left, mapping)
        if is_isomorphism(left, right, candidate, relative):
            return candidate
    return None


def round_trip_map(system: DynamicalSystem, space: LabelledSpace) -> Dict[Member, Member]:
    """x -> V_x read in the coordinates of labelled_to_gbds(space)."""
    coords = family_coordinates(space)
    return {x: coords[v] for x, v in stone_embedding(system).items()}


def duality_failures(system: DynamicalSystem, space: Optional[LabelledSpace] = None) -> List[str]:
    """Instances where r(V_x, a) ≠ V_{theta_a(x)} or the V-map breaks a lattice law."""
    space = space or stone_graph(system)
    v = stone_embedding(system)
    family = space.family
    fmt = system.format
    failures = []
    for a in system.alphabet:
        for x in system.algebra.members:
            if space.range(v[x], a) != v[system.theta[a](x)]:
                failures.append(f"r(V{fmt(x)}, {a}) ≠ V_θ{fmt(x)}")
    for x in system.algebra.members:
        for y in system.algebra.members:
            if v[x] & v[y] != v[x & y]:
                failures.append(f"V{fmt(x)} ∩ V{fmt(y)} ≠ V_∧")
            if family.join(v[x], v[y]) != v[x | y]:
                failures.append(f"V{fmt(x)} ∨ V{fmt(y)} ≠ V_∨")
            if family.difference(v[x], v[y]) != v[x & ~y]:
                failures.append(f"V{fmt(x)} \\ V{fmt(y)} ≠ V_\\")
    return failures


__all__ = [
    "Filter",
    "LabelledSpace",
    "VertexFamily",
    "is_filter",
    "filters",
    "v_set",
    "validate_labelled_space",
    "stone_graph",
    "stone_embedding",
    "family_coordinates",
    "labelled_to_gbds",
    "is_isomorphism",
    "find_isomorphism",
    "round_trip_map",
    "duality_failures",
]
