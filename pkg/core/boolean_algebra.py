"""Finite generalized Boolean algebras stored as fields of sets.

A member is an ``int`` bit pattern over the ordered ground set (bit ``i`` is
``ground[i]``).  A finite field of sets is the family of all unions of its
atoms, so :class:`FiniteGBA` keeps the ground and the atoms and generates the
members on demand.  Ideals are principal and are kept through their top
element; quotients use the representative ``A \\ top``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .coefficients import INTEGERS, CoefficientRing
from .errors import (
    BadMorphism,
    ClosureViolation,
    ForeignIdeal,
    GbdsError,
    MissingEmptySet,
    MixedAlgebras,
    NotAMember,
    UnknownVertex,
)

logger = logging.getLogger(__name__)

Member = int
MemberLike = Union[int, Iterable[str]]

# Exhaustive morphism checks stop here; above it the atom criterion is used.
EXHAUSTIVE_MEMBER_LIMIT = 4096


def popcount(member: Member) -> int:
    return bin(member).count("1")


def bit_indices(member: Member) -> Tuple[int, ...]:
    return tuple(i for i in range(member.bit_length()) if member >> i & 1)


def canonical_key(member: Member) -> Tuple[int, Tuple[int, ...]]:
    """Order by size first, then lexicographically on ground positions."""
    return popcount(member), bit_indices(member)


def sort_members(members: Iterable[Member]) -> List[Member]:
    return sorted(set(members), key=canonical_key)


def member_from_names(ground: Sequence[str], names: Iterable[str]) -> Member:
    index = {name: i for i, name in enumerate(ground)}
    mask = 0
    for name in names:
        if name not in index:
            raise UnknownVertex(name)
        mask |= 1 << index[name]
    return mask


def format_member(ground: Sequence[str], member: Member) -> str:
    return "[" + " ".join(ground[i] for i in bit_indices(member)) + "]"


def _unions(atoms: Sequence[Member]) -> List[Member]:
    out = []
    for r in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            mask = 0
            for atom in combo:
                mask |= atom
            out.append(mask)
    return sort_members(out)


@dataclass(frozen=True)
class FiniteGBA:
    """A field of sets over ``ground`` generated by ``atoms``."""

    ground: Tuple[str, ...]
    atoms: Tuple[Member, ...]

    @classmethod
    def from_atoms(cls, ground: Sequence[str], atoms: Iterable[Member]) -> "FiniteGBA":
        ordered = sort_members(a for a in atoms if a)
        seen = 0
        for atom in ordered:
            if atom & seen:
                raise GbdsError(f"atoms overlap: {format_member(ground, atom)}")
            seen |= atom
        if seen >> len(ground):
            raise GbdsError("atom outside the ground set")
        return cls(tuple(ground), tuple(ordered))

    @classmethod
    def powerset(cls, ground: Sequence[str]) -> "FiniteGBA":
        return cls.from_atoms(ground, [1 << i for i in range(len(ground))])

    @cached_property
    def top(self) -> Member:
        mask = 0
        for atom in self.atoms:
            mask |= atom
        return mask

    @cached_property
    def members(self) -> Tuple[Member, ...]:
        return tuple(_unions(self.atoms))

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    def __contains__(self, member: object) -> bool:
        if not isinstance(member, int) or member < 0 or member & ~self.top:
            return False
        return all(member & atom in (0, atom) for atom in self.atoms)

    def require(self, member: Member) -> Member:
        if member not in self:
            raise NotAMember(member, self.format(member) if isinstance(member, int) and member >= 0 else None)
        return member

    def member(self, names: MemberLike) -> Member:
        """Member from a bit pattern or an iterable of vertex names."""
        mask = names if isinstance(names, int) else member_from_names(self.ground, names)
        return self.require(mask)

    def atoms_below(self, member: Member) -> List[Member]:
        return [atom for atom in self.atoms if atom & member == atom]

    def members_below(self, member: Member) -> List[Member]:
        return _unions(self.atoms_below(member))

    def format(self, member: Member) -> str:
        return format_member(self.ground, member)


def validate_gba(ground: Sequence[str], candidate_members: Iterable[MemberLike]) -> FiniteGBA:
    """Check closure of a candidate family and return it as a FiniteGBA."""
    ground = tuple(ground)
    if len(set(ground)) != len(ground):
        raise GbdsError("ground set has repeated vertices")
    family = set()
    for candidate in candidate_members:
        family.add(candidate if isinstance(candidate, int) else member_from_names(ground, candidate))
    if any(m < 0 or m >> len(ground) for m in family):
        raise GbdsError("member outside the ground set")
    if 0 not in family:
        raise MissingEmptySet()
    ordered = sort_members(family)
    for left in ordered:
        for right in ordered:
            for op, value in (("∪", left | right), ("∩", left & right), ("\\", left & ~right)):
                if value not in family:
                    rendered = f"{op} of {format_member(ground, left)} and {format_member(ground, right)}"
                    raise ClosureViolation(op, left, right, f"family not closed under {rendered}")
    atoms = [m for m in ordered if m and not any(n and n != m and n & m == n for n in ordered)]
    gba = FiniteGBA.from_atoms(ground, atoms)
    logger.debug("validated algebra with %d members and %d atoms", len(ordered), len(atoms))
    return gba


def atoms(gba: FiniteGBA) -> List[Member]:
    return list(gba.atoms)


@dataclass(frozen=True)
class GbaIdeal:
    """A (principal) ideal of ``parent``: the down-set of ``top``."""

    parent: FiniteGBA
    top: Member

    @cached_property
    def members(self) -> Tuple[Member, ...]:
        return tuple(self.parent.members_below(self.top))

    def __contains__(self, member: object) -> bool:
        return member in self.parent and member & ~self.top == 0  # type: ignore[operator]

    def issubset(self, other: "GbaIdeal") -> bool:
        return self.top & ~other.top == 0

    def format(self) -> str:
        return f"<{self.parent.format(self.top)}>"


def ideal_generated(gba: FiniteGBA, gens: Iterable[Member]) -> GbaIdeal:
    top = 0
    for gen in gens:
        top |= gba.require(gen)
    return GbaIdeal(gba, top)


def principal_ideal(gba: FiniteGBA, member: Member) -> GbaIdeal:
    return GbaIdeal(gba, gba.require(member))


def whole_ideal(gba: FiniteGBA) -> GbaIdeal:
    return GbaIdeal(gba, gba.top)


def zero_ideal(gba: FiniteGBA) -> GbaIdeal:
    return GbaIdeal(gba, 0)


@dataclass(frozen=True)
class QuotientGBA:
    parent: FiniteGBA
    ideal: GbaIdeal

    def project(self, member: Member) -> Member:
        return self.parent.require(member) & ~self.ideal.top

    @cached_property
    def as_gba(self) -> FiniteGBA:
        """The quotient as a field of sets over the same ground."""
        kept = [atom for atom in self.parent.atoms if not atom & self.ideal.top]
        return FiniteGBA.from_atoms(self.parent.ground, kept)

    @property
    def classes(self) -> Tuple[Member, ...]:
        return self.as_gba.members

    def format(self, member: Member) -> str:
        return "[" + self.parent.format(member & ~self.ideal.top) + "]"


def quotient(gba: FiniteGBA, ideal: GbaIdeal) -> QuotientGBA:
    if ideal.parent != gba:
        raise ForeignIdeal()
    return QuotientGBA(gba, ideal)


@dataclass(frozen=True)
class GbaMorphism:
    """Join extension of ``atom_images`` (source atom -> target member)."""

    source: FiniteGBA
    target: FiniteGBA
    atom_images: Mapping[Member, Member] = field(hash=False)

    @cached_property
    def _pairs(self) -> Tuple[Tuple[Member, Member], ...]:
        return tuple((atom, self.atom_images.get(atom, 0)) for atom in self.source.atoms)

    def __call__(self, member: Member) -> Member:
        image = 0
        for atom, target in self._pairs:
            if member & atom:
                image |= target
        return image

    @property
    def is_zero(self) -> bool:
        return all(target == 0 for _, target in self._pairs)


def zero_morphism(gba: FiniteGBA) -> GbaMorphism:
    return GbaMorphism(gba, gba, {atom: 0 for atom in gba.atoms})


def make_morphism(source: FiniteGBA, target: FiniteGBA, atom_images: Mapping[Member, Member],
                  letter: Optional[str] = None,
                  exhaustive_limit: int = EXHAUSTIVE_MEMBER_LIMIT) -> GbaMorphism:
    """Build and validate the join extension of ``atom_images``."""
    for atom in atom_images:
        if atom not in source.atoms:
            raise BadMorphism(letter, "atom", atom, None, f"{source.format(atom)} is not an atom")
    images = {atom: atom_images.get(atom, 0) for atom in source.atoms}
    morphism = GbaMorphism(source, target, images)
    validate_morphism(morphism, letter, exhaustive_limit)
    return morphism


def validate_morphism(morphism: GbaMorphism, letter: Optional[str] = None,
                      exhaustive_limit: int = EXHAUSTIVE_MEMBER_LIMIT) -> GbaMorphism:
    source, target = morphism.source, morphism.target
    for atom, image in morphism._pairs:
        if image not in target:
            raise BadMorphism(letter, "image", atom, image,
                              f"image of {source.format(atom)} is not a member of the target")
    if source.size > exhaustive_limit:
        logger.warning("morphism %s: %d members, validating images of atoms only", letter, source.size)
        seen = 0
        for atom, image in morphism._pairs:
            if image & seen:
                raise BadMorphism(letter, "∩", atom, None, f"image of {source.format(atom)} overlaps")
            seen |= image
        return morphism
    members = source.members
    table: Dict[Member, Member] = {m: morphism(m) for m in members}
    for left in members:
        for right in members:
            checks = (
                ("∪", left | right, table[left] | table[right]),
                ("∩", left & right, table[left] & table[right]),
                ("\\", left & ~right, table[left] & ~table[right]),
            )
            for law, combined, expected in checks:
                if table[combined] != expected:
                    raise BadMorphism(letter, law, left, right,
                                      f"{source.format(left)} {law} {source.format(right)}")
    return morphism


def atom_expansion(gba: FiniteGBA, terms: Iterable[Tuple[int, Member]],
                   ring: CoefficientRing = INTEGERS) -> Dict[Member, int]:
    """Coefficient of every atom in the formal sum of ``p_A`` terms."""
    vector = {atom: ring.zero for atom in gba.atoms}
    for coeff, member in terms:
        if member not in gba:
            raise MixedAlgebras(member)
        for atom in gba.atoms_below(member):
            vector[atom] = ring.add(vector[atom], ring.normalize(coeff))
    return {atom: c for atom, c in vector.items() if not ring.is_zero(c)}


def disjointify(gba: FiniteGBA, terms: Iterable[Tuple[int, Member]],
                ring: CoefficientRing = INTEGERS) -> List[Tuple[int, Member]]:
    """Rewrite a sum of ``r_i p_{A_i}`` over pairwise disjoint members (atoms)."""
    vector = atom_expansion(gba, terms, ring)
    return [(vector[atom], atom) for atom in gba.atoms if atom in vector]


__all__ = [
    "Member",
    "EXHAUSTIVE_MEMBER_LIMIT",
    "FiniteGBA",
    "GbaIdeal",
    "QuotientGBA",
    "GbaMorphism",
    "popcount",
    "bit_indices",
    "canonical_key",
    "sort_members",
    "member_from_names",
    "format_member",
    "validate_gba",
    "atoms",
    "ideal_generated",
    "principal_ideal",
    "whole_ideal",
    "zero_ideal",
    "quotient",
    "zero_morphism",
    "make_morphism",
    "validate_morphism",
    "atom_expansion",
    "disjointify",
]
