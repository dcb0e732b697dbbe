"""(Relative) generalized Boolean dynamical systems.

A system is the tuple (B, L, theta, I, J): a finite field of sets ``B``, an
ordered alphabet ``L``, an endomorphism ``theta[a]`` per letter, an ideal
``I[a]`` per letter containing ``F_a`` and a relative ideal ``J`` of regular
sets.  Systems are validated once and immutable afterwards.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .boolean_algebra import (
    EXHAUSTIVE_MEMBER_LIMIT,
    FiniteGBA,
    GbaIdeal,
    GbaMorphism,
    Member,
    validate_morphism,
    zero_morphism,
)
from .errors import ForeignIdeal, GbdsError, IdealTooSmall, JNotRegular, ParseError, UnknownLetter

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
EMPTY_WORD: Word = ()


def format_word(word: Sequence[str]) -> str:
    if not word:
        return "ω"
    if all(len(letter) == 1 for letter in word):
        return "".join(word)
    return ".".join(word)


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """Split ``text`` into letters, longest match first; ``ω`` or blank is empty."""
    text = text.strip()
    if text in ("", "ω", "w", "omega"):
        return EMPTY_WORD
    letters = sorted(alphabet, key=len, reverse=True)
    word: List[str] = []
    rest = text
    while rest:
        if rest[0] in ". ":
            rest = rest[1:]
            continue
        for letter in letters:
            if rest.startswith(letter):
                word.append(letter)
                rest = rest[len(letter):]
                break
        else:
            raise ParseError("word", f"cannot read a letter at {rest!r} in {text!r}")
    return tuple(word)


class Classification(NamedTuple):
    kind: str  # regular | sink | singular-non-sink
    sink: bool


@dataclass(frozen=True)
class DynamicalSystem:
    algebra: FiniteGBA
    alphabet: Tuple[str, ...]
    theta: Mapping[str, GbaMorphism] = field(hash=False)
    ideals: Mapping[str, GbaIdeal] = field(hash=False)
    relative_ideal: GbaIdeal = field(hash=False)

    # --- tables -------------------------------------------------------

    @cached_property
    def _atom_delta(self) -> Dict[Member, FrozenSet[str]]:
        return {
            atom: frozenset(a for a in self.alphabet if self.theta[a](atom))
            for atom in self.algebra.atoms
        }

    @cached_property
    def regular_sets(self) -> GbaIdeal:
        # A set is regular iff every atom under it has a nonempty Delta.
        top = 0
        for atom, letters in self._atom_delta.items():
            if letters:
                top |= atom
        return GbaIdeal(self.algebra, top)

    @cached_property
    def sink_sets(self) -> GbaIdeal:
        top = 0
        for atom, letters in self._atom_delta.items():
            if not letters:
                top |= atom
        return GbaIdeal(self.algebra, top)

    @cached_property
    def _ideal_cache(self) -> Dict[Word, GbaIdeal]:
        return {}

    @property
    def is_relative(self) -> bool:
        return self.relative_ideal.top != self.regular_sets.top

    # --- queries ------------------------------------------------------

    def check_letter(self, letter: str) -> str:
        if letter not in self.theta:
            raise UnknownLetter(letter)
        return letter

    def delta(self, member: Member) -> FrozenSet[str]:
        self.algebra.require(member)
        letters: set = set()
        for atom in self.algebra.atoms_below(member):
            letters |= self._atom_delta[atom]
        return frozenset(letters)

    def classify(self, member: Member) -> Classification:
        sink = not self.delta(member)
        if member & ~self.regular_sets.top == 0:
            return Classification("regular", sink)
        if sink:
            return Classification("sink", True)
        return Classification("singular-non-sink", False)

    def theta_word(self, word: Sequence[str], member: Member) -> Member:
        for letter in word:
            member = self.theta[self.check_letter(letter)](member)
        return member

    def minimal_ideal(self, letter: str) -> GbaIdeal:
        """F_a: the down-set of theta_a(top)."""
        return GbaIdeal(self.algebra, self.theta[self.check_letter(letter)](self.algebra.top))

    def ideal_word(self, word: Sequence[str]) -> GbaIdeal:
        word = tuple(word)
        cached = self._ideal_cache.get(word)
        if cached is not None:
            return cached
        if not word:
            ideal = GbaIdeal(self.algebra, self.algebra.top)
        else:
            first = self.ideals[self.check_letter(word[0])]
            ideal = GbaIdeal(self.algebra, self.theta_word(word[1:], first.top))
        self._ideal_cache[word] = ideal
        return ideal

    def extend_ideal(self, ideal: GbaIdeal, letter: str) -> GbaIdeal:
        """{A : A ⊆ theta_a(B), B ∈ ideal}."""
        return GbaIdeal(self.algebra, self.theta[self.check_letter(letter)](ideal.top))

    def with_ideals(self, ideals: Mapping[str, GbaIdeal]) -> "DynamicalSystem":
        return validate_system(self.algebra, self.alphabet, self.theta, ideals, self.relative_ideal)

    def with_relative_ideal(self, relative_ideal: Optional[GbaIdeal]) -> "DynamicalSystem":
        return validate_system(self.algebra, self.alphabet, self.theta, self.ideals, relative_ideal)

    def format(self, member: Member) -> str:
        return self.algebra.format(member)

    def summary(self) -> Dict[str, object]:
        return {
            "ground": list(self.algebra.ground),
            "members": len(self.algebra.members) if self.algebra.size <= EXHAUSTIVE_MEMBER_LIMIT else self.algebra.size,
            "atoms": [self.format(a) for a in self.algebra.atoms],
            "alphabet": list(self.alphabet),
            "ideals": {a: self.format(self.ideals[a].top) for a in self.alphabet},
            "regular_top": self.format(self.regular_sets.top),
            "sink_top": self.format(self.sink_sets.top),
            "relative_top": self.format(self.relative_ideal.top),
            "relative": self.is_relative,
        }


def _first_outside(ideal: GbaIdeal, bound: Member) -> Member:
    for member in ideal.members:
        if member & ~bound:
            return member
    raise GbdsError("no witness found")  # pragma: no cover


def validate_system(algebra: FiniteGBA, alphabet: Iterable[str], theta: Mapping[str, GbaMorphism],
                    ideals: Optional[Mapping[str, GbaIdeal]] = None,
                    relative_ideal: Optional[GbaIdeal] = None,
                    exhaustive_limit: int = EXHAUSTIVE_MEMBER_LIMIT) -> DynamicalSystem:
    """Validate the parts and return the system.

    Letters without a morphism get the zero morphism, letters without an
    ideal get ``F_a``; ``relative_ideal=None`` means ``J = B_reg``.
    """
    alphabet = tuple(alphabet)
    if len(set(alphabet)) != len(alphabet):
        raise GbdsError("alphabet has repeated letters")
    ideals = dict(ideals or {})
    for letter in list(theta) + list(ideals):
        if letter not in alphabet:
            raise UnknownLetter(letter)

    morphisms: Dict[str, GbaMorphism] = {}
    for letter in alphabet:
        morphism = theta.get(letter) or zero_morphism(algebra)
        if morphism.source != algebra or morphism.target != algebra:
            raise ForeignIdeal()
        morphisms[letter] = validate_morphism(morphism, letter, exhaustive_limit)

    resolved: Dict[str, GbaIdeal] = {}
    for letter in alphabet:
        minimal = GbaIdeal(algebra, morphisms[letter](algebra.top))
        ideal = ideals.get(letter, minimal)
        if ideal.parent != algebra:
            raise ForeignIdeal()
        if not minimal.issubset(ideal):
            witness = _first_outside(minimal, ideal.top)
            raise IdealTooSmall(letter, witness, algebra.format(witness))
        resolved[letter] = ideal

    draft = DynamicalSystem(algebra, alphabet, morphisms, resolved, GbaIdeal(algebra, 0))
    regular = draft.regular_sets
    if relative_ideal is None:
        relative_ideal = regular
    if relative_ideal.parent != algebra:
        raise ForeignIdeal()
    if not relative_ideal.issubset(regular):
        witness = _first_outside(relative_ideal, regular.top)
        raise JNotRegular(witness, algebra.format(witness))

    system = DynamicalSystem(algebra, alphabet, morphisms, resolved, relative_ideal)
    logger.info(
        "system validated: %d atoms, alphabet %s, regular %s, relative %s",
        len(algebra.atoms), "".join(alphabet) or "-", algebra.format(regular.top),
        algebra.format(relative_ideal.top),
    )
    return system


__all__ = [
    "Word",
    "EMPTY_WORD",
    "Classification",
    "DynamicalSystem",
    "format_word",
    "parse_word",
    "validate_system",
]
