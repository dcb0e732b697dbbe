"""Exact arithmetic in the algebra L_R(B, L, theta, I, J).

An element is a finite sum of monomials ``(alpha, c, beta)`` with ``c`` an
atom of ``I_alpha ∩ I_beta``; the monomial stands for
``s_{alpha,c} s*_{beta,c}`` (``p_c`` when both words are empty).  Monomials
multiply through the inverse semigroup product.  The Cuntz-Krieger relation
on ``J`` is imposed by the collapse rule below, which makes every element
have a unique normal form:

  for each atom ``c`` of ``J`` let ``l(c)`` be the first letter of ``Delta_c``
  and ``d0(c)`` the first atom under ``theta_l(c)(c)``.  The monomial
  ``(alpha l, d0, beta l)`` is rewritten to
  ``(alpha, c, beta) - sum (alpha a, d, beta a)`` over the remaining pairs
  ``(a, d)`` with ``d`` an atom under ``theta_a(c)``.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .boolean_algebra import Member
from .coefficients import INTEGERS, CoefficientRing
from .dynamical_system import EMPTY_WORD, DynamicalSystem, format_word
from .errors import GbdsError, MixedSystems, NotInIdeal, RelativeSystemUnsupported
from .inverse_semigroup import SemigroupElement, element_key, enumerate_words, multiply

logger = logging.getLogger(__name__)

Monomial = SemigroupElement
Terms = Dict[Monomial, int]


def render_monomial(system: DynamicalSystem, m: Monomial) -> str:
    atom = system.format(m.A)
    if not m.alpha and not m.beta:
        return f"p{atom}"
    parts = []
    if m.alpha:
        parts.append(f"s{{{format_word(m.alpha)},{atom}}}")
    if m.beta:
        parts.append(f"S{{{format_word(m.beta)},{atom}}}")
    return "*".join(parts)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A normal-form element; ``terms`` never holds zero coefficients."""

    algebra: "SystemAlgebra"
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other: Union["AlgebraElement", int]) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self.algebra.check_compatible(other.algebra)
            return other
        if isinstance(other, int) and other == 0:
            return self.algebra.zero()
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.combine([(1, self), (1, other)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.combine([(1, self), (-1, other)])

    def __neg__(self):
        return self.algebra.combine([(-1, self)])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.algebra.combine([(other, self)])
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.algebra.combine([(other, self)])
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.equal(self, other)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def star(self) -> "AlgebraElement":
        return self.algebra.star(self)

    def degrees(self) -> List[int]:
        return sorted({len(m.alpha) - len(m.beta) for m in self.terms})

    def render(self) -> str:
        if not self.terms:
            return "0"
        system = self.algebra.system
        chunks: List[str] = []
        for m in sorted(self.terms, key=element_key):
            coeff = self.terms[m]
            body = render_monomial(system, m)
            sign = "-" if coeff < 0 else "+"
            size = abs(coeff)
            text = body if size == 1 else f"{size}*{body}"
            if not chunks:
                chunks.append(text if sign == "+" else f"-{text}")
            else:
                chunks.append(f"{sign} {text}")
        return " ".join(chunks)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"AlgebraElement({self.render()})"


class SystemAlgebra:
    """The algebra of a validated system over a coefficient ring."""

    def __init__(self, system: DynamicalSystem, ring: CoefficientRing = INTEGERS):
        self.system = system
        self.ring = ring
        self._memo: Dict[Monomial, Terms] = {}
        self._rules = self._collapse_rules()
        logger.info("algebra over %s with %d collapse rules", ring, len(self._rules))

    # --- collapse rule -------------------------------------------------

    def _collapse_rules(self) -> Dict[Tuple[str, Member], Tuple[Member, Tuple[Tuple[str, Member], ...]]]:
        system = self.system
        rules: Dict[Tuple[str, Member], Tuple[Member, Tuple[Tuple[str, Member], ...]]] = {}
        for c in system.algebra.atoms_below(system.relative_ideal.top):
            letters = sorted(system.delta(c))
            pairs = [(a, d) for a in letters for d in system.algebra.atoms_below(system.theta[a](c))]
            special, others = pairs[0], tuple(pairs[1:])
            rules[special] = (c, others)
        return rules

    @property
    def basis_conditional(self) -> bool:
        """Equality relies on the collapse basis when J ≠ {∅}."""
        return bool(self._rules)

    def forbidden_atom(self, m: Monomial) -> Optional[Member]:
        """The J-atom c whose rule rewrites ``m``, or None."""
        if m.is_zero or not m.alpha or not m.beta or m.alpha[-1] != m.beta[-1]:
            return None
        rule = self._rules.get((m.alpha[-1], m.A))
        if rule is None:
            return None
        c = rule[0]
        if c not in self.system.ideal_word(m.alpha[:-1]) or c not in self.system.ideal_word(m.beta[:-1]):
            return None
        return c

    def rewrite_step(self, m: Monomial) -> Terms:
        letter = m.alpha[-1]
        c, others = self._rules[(letter, m.A)]
        alpha, beta = m.alpha[:-1], m.beta[:-1]
        out: Terms = {SemigroupElement(alpha, c, beta): 1}
        for a, d in others:
            key = SemigroupElement(alpha + (a,), d, beta + (a,))
            out[key] = out.get(key, 0) - 1
        return out

    def _normal_monomial(self, m: Monomial) -> Terms:
        cached = self._memo.get(m)
        if cached is not None:
            return cached
        if self.forbidden_atom(m) is None:
            result: Terms = {m: 1}
        else:
            result = {}
            for key, coeff in self.rewrite_step(m).items():
                for inner, c2 in self._normal_monomial(key).items():
                    result[inner] = result.get(inner, 0) + coeff * c2
            result = {k: v for k, v in result.items() if v}
        self._memo[m] = result
        return result

    def normalize(self, terms: Mapping[Monomial, int], rng: Optional[random.Random] = None) -> Terms:
        """Normal form of a raw sum; ``rng`` picks rewrite sites at random."""
        ring = self.ring
        if rng is None:
            out: Terms = {}
            for m, coeff in terms.items():
                if m.is_zero:
                    continue
                for inner, c2 in self._normal_monomial(m).items():
                    out[inner] = ring.add(out.get(inner, ring.zero), ring.mul(ring.normalize(coeff), c2))
            return {k: v for k, v in out.items() if not ring.is_zero(v)}
        current: Terms = {m: ring.normalize(c) for m, c in terms.items() if not m.is_zero}
        current = {k: v for k, v in current.items() if not ring.is_zero(v)}
        while True:
            sites = sorted((m for m in current if self.forbidden_atom(m) is not None), key=element_key)
            if not sites:
                return current
            site = rng.choice(sites)
            coeff = current.pop(site)
            for key, c2 in self.rewrite_step(site).items():
                value = ring.add(current.get(key, ring.zero), ring.mul(coeff, ring.normalize(c2)))
                if ring.is_zero(value):
                    current.pop(key, None)
                else:
                    current[key] = value

    # --- construction --------------------------------------------------

    def check_compatible(self, other: "SystemAlgebra") -> None:
        if other is self:
            return
        if other.ring != self.ring or other.system != self.system:
            raise MixedSystems()

    def element(self, terms: Mapping[Monomial, int]) -> AlgebraElement:
        return AlgebraElement(self, self.normalize(terms))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def combine(self, pieces: Iterable[Tuple[int, AlgebraElement]]) -> AlgebraElement:
        ring = self.ring
        out: Terms = {}
        for scalar, x in pieces:
            self.check_compatible(x.algebra)
            r = ring.normalize(scalar)
            for m, coeff in x.terms.items():
                out[m] = ring.add(out.get(m, ring.zero), ring.mul(r, coeff))
        return AlgebraElement(self, {k: v for k, v in out.items() if not ring.is_zero(v)})

    def inject_p(self, A: Member) -> AlgebraElement:
        algebra = self.system.algebra
        algebra.require(A)
        return self.element({SemigroupElement(EMPTY_WORD, c, EMPTY_WORD): 1 for c in algebra.atoms_below(A)})

    def inject_s(self, letter: str, A: Member, starred: bool = False) -> AlgebraElement:
        self.system.check_letter(letter)
        return self.inject_s_word((letter,), A, starred)

    def inject_s_word(self, word: Sequence[str], A: Member, starred: bool = False) -> AlgebraElement:
        """s_{word,A} (or its star) for A ∈ I_word."""
        word = tuple(word)
        system = self.system
        system.algebra.require(A)
        if A not in system.ideal_word(word):
            raise NotInIdeal(format_word(word), A, system.format(A))
        terms: Terms = {}
        for c in system.algebra.atoms_below(A):
            key = SemigroupElement(EMPTY_WORD, c, word) if starred else SemigroupElement(word, c, EMPTY_WORD)
            terms[key] = 1
        return self.element(terms)

    def monomial(self, alpha: Sequence[str], c: Member, beta: Sequence[str]) -> AlgebraElement:
        return self.element({SemigroupElement(tuple(alpha), c, tuple(beta)): 1})

    def projection_sum(self, letter: str, A: Member) -> AlgebraElement:
        """s_{a,A} s*_{a,A} as the sum of (a, d, a) over atoms d ⊆ A."""
        return self.element({SemigroupElement((letter,), d, (letter,)): 1
                             for d in self.system.algebra.atoms_below(A)})

    def q_element(self, A: Member) -> AlgebraElement:
        system = self.system
        system.algebra.require(A)
        terms: Terms = {SemigroupElement(EMPTY_WORD, c, EMPTY_WORD): 1 for c in system.algebra.atoms_below(A)}
        for letter in system.alphabet:
            image = system.theta[letter](A)
            for d in system.algebra.atoms_below(image):
                key = SemigroupElement((letter,), d, (letter,))
                terms[key] = terms.get(key, 0) - 1
        return self.element(terms)

    # --- operations ----------------------------------------------------

    def mul(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        self.check_compatible(x.algebra)
        self.check_compatible(y.algebra)
        ring = self.ring
        raw: Terms = {}
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                product = multiply(self.system, m1, m2)
                if not product.is_zero:
                    raw[product] = ring.add(raw.get(product, ring.zero), ring.mul(c1, c2))
        return self.element(raw)

    def star(self, x: AlgebraElement) -> AlgebraElement:
        flipped = {SemigroupElement(m.beta, m.A, m.alpha): c for m, c in x.terms.items()}
        return self.element(flipped)

    def equal(self, x: AlgebraElement, y: AlgebraElement) -> bool:
        self.check_compatible(x.algebra)
        self.check_compatible(y.algebra)
        return dict(x.terms) == dict(y.terms)

    def z_components(self, x: AlgebraElement) -> Dict[int, AlgebraElement]:
        parts: Dict[int, Terms] = {}
        for m, coeff in x.terms.items():
            parts.setdefault(len(m.alpha) - len(m.beta), {})[m] = coeff
        return {degree: AlgebraElement(self, terms) for degree, terms in sorted(parts.items())}

    def forbidden_monomials(self, bound: int) -> List[Monomial]:
        return [m for m in self.raw_monomials(bound) if self.forbidden_atom(m) is not None]

    def raw_monomials(self, bound: int) -> List[Monomial]:
        """Every monomial with |alpha| + |beta| ≤ bound, forbidden ones included."""
        system = self.system
        words = enumerate_words(system, bound)
        found = []
        for alpha in words:
            for beta in words:
                if len(alpha) + len(beta) > bound:
                    continue
                top = system.ideal_word(alpha).top & system.ideal_word(beta).top
                for c in system.algebra.atoms_below(top):
                    found.append(SemigroupElement(alpha, c, beta))
        return sorted(found, key=element_key)

    def basis_monomials(self, bound: int) -> List[Monomial]:
        return [m for m in self.raw_monomials(bound) if self.forbidden_atom(m) is None]

    # --- annihilators --------------------------------------------------

    def _generators(self) -> List[AlgebraElement]:
        system = self.system
        gens = []
        for letter in system.alphabet:
            for d in system.algebra.atoms_below(system.ideals[letter].top):
                gens.append(self.monomial((letter,), d, EMPTY_WORD))
        return gens

    def _solve(self, constraints: Sequence[AlgebraElement], columns: int,
               products) -> List[List[int]]:
        """Nullspace over Q of the map lambda -> (sum lambda_c p_c) * g for each constraint."""
        index: Dict[Tuple[int, int, Monomial], int] = {}
        entries: Dict[Tuple[int, int], int] = {}
        for col in range(columns):
            for g_index, g in enumerate(constraints):
                for side, produced in enumerate(products(col, g)):
                    for m, coeff in produced.terms.items():
                        row = index.setdefault((g_index, side, m), len(index))
                        entries[(row, col)] = entries.get((row, col), 0) + coeff
        if not index:
            return [[1 if i == j else 0 for i in range(columns)] for j in range(columns)]
        matrix = sympy.zeros(len(index), columns)
        for (row, col), value in entries.items():
            matrix[row, col] = value
        return [[int(v) for v in vec] for vec in matrix.nullspace()]

    def _unit_monomials(self, vectors: List[List[int]]) -> List[Monomial]:
        atoms = self.system.algebra.atoms
        out = []
        for vec in vectors:
            support = [i for i, v in enumerate(vec) if v]
            if len(support) != 1:
                raise GbdsError("annihilator basis is not spanned by atom projections")
            out.append(SemigroupElement(EMPTY_WORD, atoms[support[0]], EMPTY_WORD))
        return sorted(out, key=element_key)

    def ann_basis(self) -> Tuple[List[Monomial], List[Monomial]]:
        """Bases of Ann_S(I) and its perp inside S = span{p_A}, by linear solving."""
        system = self.system
        if system.is_relative:
            raise RelativeSystemUnsupported("ann_basis")
        atoms = system.algebra.atoms
        projections = [self.monomial(EMPTY_WORD, c, EMPTY_WORD) for c in atoms]
        gens = self._generators()
        ann = self._unit_monomials(self._solve(gens, len(atoms), lambda col, g: [projections[col] * g]))
        ann_elements = [self.element({m: 1}) for m in ann]
        perp = self._unit_monomials(self._solve(
            ann_elements, len(atoms),
            lambda col, y: [projections[col] * y, y * projections[col]],
        ))
        return ann, perp

    def local_unit(self, generators: Sequence[Tuple[str, Member]]) -> AlgebraElement:
        """a = sum_b s_{b,A_b} s*_{b,A_b} with A_b the union of the generator sets for b."""
        unions: Dict[str, Member] = {}
        for letter, A in generators:
            unions[letter] = unions.get(letter, 0) | A
        total = self.zero()
        for letter, A in unions.items():
            total = total + self.projection_sum(letter, A)
        return total


def ann_closed_forms(system: DynamicalSystem) -> Tuple[List[Monomial], List[Monomial]]:
    sinks = system.sink_sets.top
    ann = [SemigroupElement(EMPTY_WORD, c, EMPTY_WORD) for c in system.algebra.atoms if c & sinks == c]
    perp = [SemigroupElement(EMPTY_WORD, c, EMPTY_WORD) for c in system.algebra.atoms if not c & sinks]
    return sorted(ann, key=element_key), sorted(perp, key=element_key)


def ann_intersection_trivial(system: DynamicalSystem, ann: Sequence[Monomial], perp: Sequence[Monomial]) -> bool:
    atoms = list(system.algebra.atoms)
    rows = [[1 if m.A == c else 0 for c in atoms] for m in list(ann) + list(perp)]
    if not rows:
        return True
    return sympy.Matrix(rows).rank() == len(rows)


def relation_residues(algebra: SystemAlgebra, word_len: int = 2,
                      member_limit: int = 64) -> Iterator[Tuple[str, AlgebraElement]]:
    """Yield (label, lhs - rhs) for instances of the defining relations and of p_A q_B = q_B p_A = q_{A∩B}."""
    system = algebra.system
    gba = system.algebra
    members = list(gba.members[:member_limit])
    p = {A: algebra.inject_p(A) for A in members}
    fmt = system.format

    yield "p_∅ = 0", algebra.inject_p(0)
    for A, B in itertools.product(members, repeat=2):
        if A | B in p and A & B in p:
            yield f"p{fmt(A)}p{fmt(B)} = p{fmt(A & B)}", p[A] * p[B] - p[A & B]
            yield f"p{fmt(A | B)} = p{fmt(A)} + p{fmt(B)} - p{fmt(A & B)}", p[A | B] - p[A] - p[B] + p[A & B]

    words = [w for w in enumerate_words(system, word_len) if w]
    for word in words:
        ideal = system.ideal_word(word)
        for B in ideal.members[:member_limit]:
            s = algebra.inject_s_word(word, B)
            s_star = algebra.inject_s_word(word, B, starred=True)
            label = format_word(word)
            for A in members:
                image = system.theta_word(word, A)
                yield (f"p{fmt(A)}s{{{label},{fmt(B)}}} = s p_θ(A)",
                       p[A] * s - s * algebra.inject_p(image))
                yield (f"S{{{label},{fmt(B)}}}p{fmt(A)} = p_θ(A) S",
                       s_star * p[A] - algebra.inject_p(image) * s_star)
                yield (f"s{{{label},{fmt(B)}}}p{fmt(A)} = s{{{label},{fmt(B & A)}}}",
                       s * p[A] - algebra.inject_s_word(word, B & A))
                yield (f"p{fmt(A)}S{{{label},{fmt(B)}}} = S{{{label},{fmt(B & A)}}}",
                       p[A] * s_star - algebra.inject_s_word(word, B & A, starred=True))

    for a, b in itertools.product(system.alphabet, repeat=2):
        for B in system.ideals[a].members[:member_limit]:
            for C in system.ideals[b].members[:member_limit]:
                lhs = algebra.inject_s(a, B, starred=True) * algebra.inject_s(b, C)
                rhs = algebra.inject_p(B & C) if a == b else algebra.zero()
                yield f"S{{{a},{fmt(B)}}}s{{{b},{fmt(C)}}} = δ p", lhs - rhs

    for A in system.relative_ideal.members[:member_limit]:
        total = algebra.zero()
        for letter in system.alphabet:
            total = total + algebra.projection_sum(letter, system.theta[letter](A))
        yield f"p{fmt(A)} = Σ s s* on J", p[A] - total

    q = {}
    for B in system.regular_sets.members[:member_limit]:
        q[B] = algebra.q_element(B)
    for B, qB in q.items():
        for A in members:
            qAB = algebra.q_element(A & B)
            yield f"p{fmt(A)}q{fmt(B)} = q{fmt(A & B)}", p[A] * qB - qAB
            yield f"q{fmt(B)}p{fmt(A)} = q{fmt(A & B)}", qB * p[A] - qAB


__all__ = [
    "Monomial",
    "AlgebraElement",
    "SystemAlgebra",
    "render_monomial",
    "ann_closed_forms",
    "ann_intersection_trivial",
    "relation_residues",
]
