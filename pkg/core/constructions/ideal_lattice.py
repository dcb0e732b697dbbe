"""Hereditary saturated ideals, admissible pairs and the lattice they form."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional

import networkx as nx

from ..boolean_algebra import GbaIdeal, GbaMorphism, Member, principal_ideal, quotient
from ..dynamical_system import DynamicalSystem, validate_system
from ..inverse_semigroup import SemigroupElement
from ..skew_algebra import AlgebraElement, Monomial, SystemAlgebra

logger = logging.getLogger(__name__)


def is_hereditary(system: DynamicalSystem, ideal: GbaIdeal) -> bool:
    return all(system.theta[a](ideal.top) & ~ideal.top == 0 for a in system.alphabet)


def is_saturated(system: DynamicalSystem, ideal: GbaIdeal) -> bool:
    """A ∈ J with theta_a(A) ∈ H for all a forces A ∈ H (checked on atoms of J)."""
    for c in system.algebra.atoms_below(system.relative_ideal.top):
        if all(system.theta[a](c) & ~ideal.top == 0 for a in system.alphabet) and c & ~ideal.top:
            return False
    return True


def hereditary_saturated_closure(system: DynamicalSystem, gens: Iterable[Member]) -> GbaIdeal:
    top = 0
    for gen in gens:
        top |= system.algebra.require(gen)
    j_atoms = system.algebra.atoms_below(system.relative_ideal.top)
    while True:
        grown = top
        for a in system.alphabet:
            grown |= system.theta[a](grown)
        for c in j_atoms:
            if all(system.theta[a](c) & ~grown == 0 for a in system.alphabet):
                grown |= c
        if grown == top:
            return GbaIdeal(system.algebra, top)
        top = grown


def quotient_system(system: DynamicalSystem, hereditary: GbaIdeal,
                    relative_top: Optional[Member] = None) -> DynamicalSystem:
    """(B/H, L, theta/H, I/H, S/H) over the representatives ``A \\ H``."""
    carrier = quotient(system.algebra, hereditary).as_gba
    cut = ~hereditary.top
    theta = {
        a: GbaMorphism(carrier, carrier, {c: system.theta[a](c) & cut for c in carrier.atoms})
        for a in system.alphabet
    }
    ideals = {a: GbaIdeal(carrier, system.ideals[a].top & cut) for a in system.alphabet}
    relative = None if relative_top is None else GbaIdeal(carrier, relative_top & cut)
    return validate_system(carrier, system.alphabet, theta, ideals, relative)


def regular_preimage(system: DynamicalSystem, hereditary: GbaIdeal) -> GbaIdeal:
    """B_H: the sets whose class in B/H is regular."""
    plain = quotient_system(system, hereditary)
    return GbaIdeal(system.algebra, plain.regular_sets.top | hereditary.top)


@dataclass(frozen=True)
class AdmissiblePair:
    H: GbaIdeal
    S: GbaIdeal
    quotient: DynamicalSystem

    def leq(self, other: "AdmissiblePair") -> bool:
        return self.H.issubset(other.H) and self.S.issubset(other.S)

    def key(self):
        return self.H.top, self.S.top

    def format(self) -> str:
        return f"(H={self.H.format()}, S={self.S.format()})"


@dataclass
class PairLattice:
    system: DynamicalSystem
    pairs: List[AdmissiblePair]

    @cached_property
    def order(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.pairs)))
        for i, p in enumerate(self.pairs):
            for j, q in enumerate(self.pairs):
                if i != j and p.leq(q):
                    graph.add_edge(i, j)
        return graph

    @cached_property
    def hasse(self) -> nx.DiGraph:
        reduced = nx.transitive_reduction(self.order)
        reduced.add_nodes_from((i, {"label": p.format()}) for i, p in enumerate(self.pairs))
        return reduced

    def _bound(self, p: AdmissiblePair, q: AdmissiblePair, lower: bool) -> Optional[AdmissiblePair]:
        if lower:
            common = [r for r in self.pairs if r.leq(p) and r.leq(q)]
            best = [r for r in common if all(s.leq(r) for s in common)]
        else:
            common = [r for r in self.pairs if p.leq(r) and q.leq(r)]
            best = [r for r in common if all(r.leq(s) for s in common)]
        return best[0] if len(best) == 1 else None

    def meet(self, p: AdmissiblePair, q: AdmissiblePair) -> Optional[AdmissiblePair]:
        return self._bound(p, q, lower=True)

    def join(self, p: AdmissiblePair, q: AdmissiblePair) -> Optional[AdmissiblePair]:
        return self._bound(p, q, lower=False)

    def find(self, H_top: Member, S_top: Member) -> Optional[AdmissiblePair]:
        for p in self.pairs:
            if p.key() == (H_top, S_top):
                return p
        return None

    @property
    def is_lattice(self) -> bool:
        return all(
            self.meet(p, q) is not None and self.join(p, q) is not None
            for p in self.pairs for q in self.pairs
        )

    @property
    def meets_are_componentwise(self) -> bool:
        for p in self.pairs:
            for q in self.pairs:
                m = self.meet(p, q)
                if m is None or m.key() != (p.H.top & q.H.top, p.S.top & q.S.top):
                    return False
        return True

    def table(self) -> List[Dict[str, str]]:
        return [
            {
                "H": p.H.format(),
                "S": p.S.format(),
                "B_H": regular_preimage(self.system, p.H).format(),
                "quotient_regular": p.quotient.regular_sets.format(),
            }
            for p in self.pairs
        ]


def admissible_pairs(system: DynamicalSystem) -> PairLattice:
    gba = system.algebra
    pairs: List[AdmissiblePair] = []
    for u in gba.members:
        H = principal_ideal(gba, u)
        if not is_hereditary(system, H) or not is_saturated(system, H):
            continue
        upper = regular_preimage(system, H).top
        lower = u | system.relative_ideal.top
        for s in gba.members:
            if s & lower != lower or s & ~upper:
                continue
            pairs.append(AdmissiblePair(H, principal_ideal(gba, s), quotient_system(system, H, s)))
    logger.info("%d admissible pairs", len(pairs))
    return PairLattice(system, pairs)


def pair_generator(algebra: SystemAlgebra, pair: AdmissiblePair, A: Member) -> AlgebraElement:
    """p_A - sum over Delta of [A]_H of s_{a,theta_a(A)} s*_{a,theta_a(A)}."""
    system = algebra.system
    x = algebra.inject_p(A)
    for a in system.alphabet:
        if a in pair.quotient.delta(A & ~pair.H.top):
            x = x - algebra.projection_sum(a, system.theta[a](A))
    return x


def ideal_generators(algebra: SystemAlgebra, pair: AdmissiblePair) -> List[AlgebraElement]:
    """The generator of every nonempty A ∈ S."""
    return [pair_generator(algebra, pair, A) for A in pair.S.members if A]


def project_to_quotient(x: AlgebraElement, pair: AdmissiblePair,
                        target: Optional[SystemAlgebra] = None) -> AlgebraElement:
    """Image of ``x`` under (alpha, c, beta) -> (alpha, c \\ H, beta) in the algebra of the quotient system."""
    if target is None:
        target = SystemAlgebra(pair.quotient, x.algebra.ring)
    cut = ~pair.H.top
    terms: Dict[Monomial, int] = {}
    for m, coeff in x.terms.items():
        c = m.A & cut
        if c:
            key = SemigroupElement(m.alpha, c, m.beta)
            terms[key] = terms.get(key, 0) + coeff
    return target.element(terms)


def kernel_failures(algebra: SystemAlgebra, pair: AdmissiblePair) -> List[str]:
    """Where the kernel of the quotient map disagrees with (H, S).

    p_A must die exactly for A ∈ H, and the generator of A ∈ B_H exactly for A ∈ S.
    """
    system = algebra.system
    fmt = system.format
    target = SystemAlgebra(pair.quotient, algebra.ring)
    failures = []
    for A in system.algebra.members:
        killed = project_to_quotient(algebra.inject_p(A), pair, target).is_zero
        if killed != (A & ~pair.H.top == 0):
            failures.append(f"{pair.format()}: p{fmt(A)} {'dies' if killed else 'survives'}")
    for A in regular_preimage(system, pair.H).members:
        if not A:
            continue
        killed = project_to_quotient(pair_generator(algebra, pair, A), pair, target).is_zero
        if killed != (A & ~pair.S.top == 0):
            failures.append(f"{pair.format()}: generator of {fmt(A)} {'dies' if killed else 'survives'}")
    return failures


__all__ = [
    "AdmissiblePair",
    "PairLattice",
    "is_hereditary",
    "is_saturated",
    "hereditary_saturated_closure",
    "quotient_system",
    "regular_preimage",
    "admissible_pairs",
    "pair_generator",
    "ideal_generators",
    "project_to_quotient",
    "kernel_failures",
]
