"""Relative to non-relative: the tilde system and the maps between the algebras."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

from ..boolean_algebra import FiniteGBA, Member, make_morphism, principal_ideal, validate_gba
from ..coefficients import INTEGERS, CoefficientRing
from ..dynamical_system import DynamicalSystem, validate_system
from ..errors import GbdsError, NotEquivalent
from ..skew_algebra import AlgebraElement, SystemAlgebra

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TildeSystem:
    """Pairs (A, [B]_J) with [A]_reg = [B]_reg, encoded as A | (B \\ J) << n."""

    base: DynamicalSystem
    system: DynamicalSystem

    @property
    def carrier(self) -> FiniteGBA:
        return self.system.algebra

    @property
    def _width(self) -> int:
        return len(self.base.algebra.ground)

    def encode(self, A: Member, B: Member) -> Member:
        regular = self.base.regular_sets.top
        if A & ~regular != B & ~regular:
            raise NotEquivalent(A, B, f"{self.base.format(A)}, {self.base.format(B)}")
        return A | ((B & ~self.base.relative_ideal.top) << self._width)

    def decode(self, pair: Member) -> Tuple[Member, Member]:
        mask = (1 << self._width) - 1
        return pair & mask, pair >> self._width

    def format(self, pair: Member) -> str:
        A, K = self.decode(pair)
        return f"({self.base.format(A)}, [{self.base.format(K)}])"

    @cached_property
    def expected_regular_top(self) -> Member:
        """Top of {(A, [∅]) : A ∈ B_reg}."""
        return self.base.regular_sets.top

    @property
    def regular_sets_match(self) -> bool:
        return self.system.regular_sets.top == self.expected_regular_top


def _pairs(base: DynamicalSystem) -> List[Member]:
    members = base.algebra.members
    regular = base.regular_sets.top
    relative = base.relative_ideal.top
    width = len(base.algebra.ground)
    found = set()
    for A in members:
        for B in members:
            if A & ~regular == B & ~regular:
                found.add(A | ((B & ~relative) << width))
    return sorted(found)


def tilde_system(base: DynamicalSystem) -> TildeSystem:
    ground = base.algebra.ground
    carrier = validate_gba(tuple(ground) + tuple(f"{v}'" for v in ground), _pairs(base))
    width = len(ground)
    relative = base.relative_ideal.top

    def lift(A: Member) -> Member:
        return A | ((A & ~relative) << width)

    theta = {}
    for letter in base.alphabet:
        images = {}
        for atom in carrier.atoms:
            A = atom & ((1 << width) - 1)
            images[atom] = lift(base.theta[letter](A))
        theta[letter] = make_morphism(carrier, carrier, images, letter)
    ideals = {letter: principal_ideal(carrier, lift(base.ideals[letter].top)) for letter in base.alphabet}
    system = validate_system(carrier, base.alphabet, theta, ideals)
    tilde = TildeSystem(base, system)
    if not tilde.regular_sets_match:
        logger.error("tilde regular sets %s differ from {(A, [∅]) : A regular}",
                     carrier.format(system.regular_sets.top))
    logger.info("tilde system with %d members", len(carrier.members))
    return tilde


def find_CD(system: DynamicalSystem, A: Member, B: Member) -> Tuple[Member, Member]:
    """Regular C, D with A ∪ C = B ∪ D and A ∩ C = ∅ = B ∩ D."""
    system.algebra.require(A)
    system.algebra.require(B)
    regular = system.regular_sets.top
    if A & ~regular != B & ~regular:
        raise NotEquivalent(A, B, f"{system.format(A)}, {system.format(B)}")
    C, D = B & ~A, A & ~B
    if C & ~regular or D & ~regular or A | C != B | D or A & C or B & D:
        raise GbdsError(f"no regular complements for {system.format(A)}, {system.format(B)}")
    return C, D


class TildeMaps:
    """phi: L(base) -> L(tilde) and psi: L(tilde) -> L(base) on normal forms."""

    def __init__(self, tilde: TildeSystem, ring: CoefficientRing = INTEGERS):
        self.tilde = tilde
        self.source = SystemAlgebra(tilde.base, ring)
        self.target = SystemAlgebra(tilde.system, ring)
        self._p_images: Dict[Member, AlgebraElement] = {}

    @staticmethod
    def _word_s(algebra: SystemAlgebra, word, starred: bool = False) -> AlgebraElement:
        return algebra.inject_s_word(word, algebra.system.ideal_word(word).top, starred)

    def _sandwich(self, algebra: SystemAlgebra, alpha, middle: AlgebraElement, beta) -> AlgebraElement:
        out = middle
        if alpha:
            out = self._word_s(algebra, alpha) * out
        if beta:
            out = out * self._word_s(algebra, beta, starred=True)
        return out

    def phi(self, x: AlgebraElement) -> AlgebraElement:
        total = self.target.zero()
        for m, coeff in x.terms.items():
            middle = self.target.inject_p(self.tilde.encode(m.A, m.A))
            total = total + coeff * self._sandwich(self.target, m.alpha, middle, m.beta)
        return total

    def psi_p(self, pair: Member) -> AlgebraElement:
        """p_A + q_C - q_D for the pair (A, [B])."""
        if pair not in self._p_images:
            A, K = self.tilde.decode(pair)
            C, D = find_CD(self.tilde.base, A, K)
            self._p_images[pair] = (self.source.inject_p(A) + self.source.q_element(C)
                                    - self.source.q_element(D))
        return self._p_images[pair]

    def psi(self, y: AlgebraElement) -> AlgebraElement:
        total = self.source.zero()
        for m, coeff in y.terms.items():
            total = total + coeff * self._sandwich(self.source, m.alpha, self.psi_p(m.A), m.beta)
        return total

    def round_trip_failures(self) -> List[str]:
        """Generators on which psi∘phi or phi∘psi is not the identity."""
        failures: List[str] = []
        base, tilde_sys = self.tilde.base, self.tilde.system
        source, target = self.source, self.target
        checks = []
        for A in base.algebra.members:
            checks.append(("ψφ", f"p{base.format(A)}", source.inject_p(A)))
        for letter in base.alphabet:
            for A in base.ideals[letter].members:
                checks.append(("ψφ", f"s{{{letter},{base.format(A)}}}", source.inject_s(letter, A)))
                checks.append(("ψφ", f"S{{{letter},{base.format(A)}}}", source.inject_s(letter, A, True)))
        for x in tilde_sys.algebra.members:
            checks.append(("φψ", f"p{self.tilde.format(x)}", target.inject_p(x)))
        for letter in tilde_sys.alphabet:
            for X in tilde_sys.ideals[letter].members:
                checks.append(("φψ", f"s{{{letter},{self.tilde.format(X)}}}", target.inject_s(letter, X)))
                checks.append(("φψ", f"S{{{letter},{self.tilde.format(X)}}}", target.inject_s(letter, X, True)))
        for direction, label, x in checks:
            back = self.psi(self.phi(x)) if direction == "ψφ" else self.phi(self.psi(x))
            if back != x:
                failures.append(f"{direction}({label}) = {back.render()}")
        return failures


__all__ = ["TildeSystem", "TildeMaps", "tilde_system", "find_CD"]
