"""The inverse semigroup of a Boolean dynamical system.

Elements are ``0`` or triples ``(alpha, A, beta)`` with ``A`` a nonempty
member of ``I_alpha ∩ I_beta``.  The zero element is the triple with the
empty set, so every element is a plain hashable value; the system is passed
to the operations that need it.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .boolean_algebra import Member, canonical_key
from .dynamical_system import EMPTY_WORD, DynamicalSystem, Word, format_word
from .errors import InvalidElement, NotIdempotent, NotInDomain, ParseError, ZeroUngraded

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemigroupElement:
    alpha: Word = EMPTY_WORD
    A: Member = 0
    beta: Word = EMPTY_WORD

    @property
    def is_zero(self) -> bool:
        return self.A == 0

    @property
    def is_idempotent(self) -> bool:
        return self.is_zero or self.alpha == self.beta

    def length(self) -> int:
        return len(self.alpha) + len(self.beta)

    def render(self, system: DynamicalSystem) -> str:
        if self.is_zero:
            return "0"
        return f"({format_word(self.alpha)}, {system.format(self.A)}, {format_word(self.beta)})"


ZERO = SemigroupElement()


def element_key(s: SemigroupElement):
    return s.length(), s.alpha, s.beta, canonical_key(s.A)


def element(system: DynamicalSystem, alpha: Sequence[str], A: Member, beta: Sequence[str]) -> SemigroupElement:
    """Validated constructor; an empty middle set gives zero."""
    alpha, beta = tuple(alpha), tuple(beta)
    system.algebra.require(A)
    if not A:
        return ZERO
    if A not in system.ideal_word(alpha) or A not in system.ideal_word(beta):
        raise InvalidElement(
            f"{system.format(A)} is not in I_{format_word(alpha)} ∩ I_{format_word(beta)}"
        )
    return SemigroupElement(alpha, A, beta)


def multiply(system: DynamicalSystem, s: SemigroupElement, t: SemigroupElement) -> SemigroupElement:
    if s.is_zero or t.is_zero:
        return ZERO
    alpha, A, beta = s.alpha, s.A, s.beta
    gamma, B, delta = t.alpha, t.A, t.beta
    if beta == gamma:
        middle = A & B
        return SemigroupElement(alpha, middle, delta) if middle else ZERO
    if gamma[:len(beta)] == beta:
        rest = gamma[len(beta):]
        middle = system.theta_word(rest, A) & B
        return SemigroupElement(alpha + rest, middle, delta) if middle else ZERO
    if beta[:len(gamma)] == gamma:
        rest = beta[len(gamma):]
        middle = A & system.theta_word(rest, B)
        return SemigroupElement(alpha, middle, delta + rest) if middle else ZERO
    return ZERO


def star(s: SemigroupElement) -> SemigroupElement:
    if s.is_zero:
        return ZERO
    return SemigroupElement(s.beta, s.A, s.alpha)


def idempotent_leq(system: DynamicalSystem, e1: SemigroupElement, e2: SemigroupElement) -> bool:
    for e in (e1, e2):
        if not e.is_idempotent:
            raise NotIdempotent(f"{e.render(system)} is not an idempotent")
    if e1.is_zero:
        return True
    if e2.is_zero:
        return False
    prefix = e2.alpha
    if e1.alpha[:len(prefix)] != prefix:
        return False
    rest = e1.alpha[len(prefix):]
    return e1.A & ~system.theta_word(rest, e2.A) == 0


def natural_leq(system: DynamicalSystem, s: SemigroupElement, t: SemigroupElement) -> bool:
    """s ≤ t in the natural partial order, i.e. s = s s* t."""
    return s == multiply(system, multiply(system, s, star(s)), t)


@dataclass(frozen=True)
class FreeGroupWord:
    """Reduced word over signed letters; the empty word is the identity."""

    letters: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def reduced(cls, letters: Iterable[Tuple[str, int]]) -> "FreeGroupWord":
        stack: List[Tuple[str, int]] = []
        for letter, sign in letters:
            if stack and stack[-1][0] == letter and stack[-1][1] == -sign:
                stack.pop()
            else:
                stack.append((letter, sign))
        return cls(tuple(stack))

    @classmethod
    def from_words(cls, positive: Sequence[str], negative: Sequence[str] = ()) -> "FreeGroupWord":
        """The reduced form of ``positive · negative⁻¹``."""
        signed = [(a, 1) for a in positive] + [(a, -1) for a in reversed(negative)]
        return cls.reduced(signed)

    @classmethod
    def parse(cls, text: str, alphabet: Sequence[str]) -> "FreeGroupWord":
        text = text.replace(" ", "").replace(".", "")
        if text in ("", "e", "1"):
            return cls()
        letters = sorted(alphabet, key=len, reverse=True)
        signed: List[Tuple[str, int]] = []
        rest = text
        while rest:
            for letter in letters:
                if rest.startswith(letter):
                    rest = rest[len(letter):]
                    sign = 1
                    for suffix in ("^-1", "⁻¹"):
                        if rest.startswith(suffix):
                            rest = rest[len(suffix):]
                            sign = -1
                            break
                    signed.append((letter, sign))
                    break
            else:
                raise ParseError("grade", f"cannot read a letter at {rest!r}")
        return cls.reduced(signed)

    def __mul__(self, other: "FreeGroupWord") -> "FreeGroupWord":
        return FreeGroupWord.reduced(self.letters + other.letters)

    def inverse(self) -> "FreeGroupWord":
        return FreeGroupWord(tuple((a, -s) for a, s in reversed(self.letters)))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def split(self) -> Optional[Tuple[Word, Word]]:
        """(p1, p2) with self = p1 p2⁻¹, or None when no such split exists."""
        signs = [s for _, s in self.letters]
        k = 0
        while k < len(signs) and signs[k] == 1:
            k += 1
        if any(s == 1 for s in signs[k:]):
            return None
        p1 = tuple(a for a, _ in self.letters[:k])
        p2 = tuple(a for a, _ in reversed(self.letters[k:]))
        return p1, p2

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        parts = [a if s == 1 else f"{a}^-1" for a, s in self.letters]
        joiner = "" if all(len(a) == 1 for a, _ in self.letters) else "."
        return joiner.join(parts)


def grade(s: SemigroupElement) -> FreeGroupWord:
    if s.is_zero:
        raise ZeroUngraded()
    return FreeGroupWord.from_words(s.alpha, s.beta)


# --- enumeration ---------------------------------------------------------

def enumerate_words(system: DynamicalSystem, max_len: int) -> List[Word]:
    """Words of length ≤ max_len whose ideal is not {∅}; ω first."""
    words: List[Word] = [EMPTY_WORD]
    frontier: List[Word] = [EMPTY_WORD]
    for _ in range(max_len):
        grown: List[Word] = []
        for word in frontier:
            for letter in system.alphabet:
                candidate = word + (letter,)
                if system.ideal_word(candidate).top:
                    grown.append(candidate)
        words.extend(grown)
        frontier = grown
    return words


def _sets_below(system: DynamicalSystem, top: Member, member_limit: Optional[int]) -> List[Member]:
    algebra = system.algebra
    below = algebra.atoms_below(top)
    if member_limit is not None and (1 << len(below)) > member_limit:
        logger.warning("%d atoms under %s: sampling atoms and the top only", len(below), algebra.format(top))
        return sorted(set(below) | {top}, key=canonical_key)
    return algebra.members_below(top)


def enumerate_elements(system: DynamicalSystem, bound: int, include_zero: bool = False,
                       member_limit: Optional[int] = None) -> List[SemigroupElement]:
    """Every nonzero element with |alpha| + |beta| ≤ bound, in canonical order.

    With ``member_limit`` the middle sets of large ideals are sampled (atoms
    plus the top) instead of listed.
    """
    words = enumerate_words(system, bound)
    found: List[SemigroupElement] = []
    for alpha in words:
        for beta in words:
            if len(alpha) + len(beta) > bound:
                continue
            top = system.ideal_word(alpha).top & system.ideal_word(beta).top
            if not top:
                continue
            for A in _sets_below(system, top, member_limit):
                if A:
                    found.append(SemigroupElement(alpha, A, beta))
    found.sort(key=element_key)
    if include_zero:
        found.insert(0, ZERO)
    logger.debug("enumerated %d elements at bound %d", len(found), bound)
    return found


def idempotents(elements: Iterable[SemigroupElement]) -> List[SemigroupElement]:
    return [s for s in elements if s.is_idempotent]


Triple = Tuple[SemigroupElement, SemigroupElement, SemigroupElement]


def sandwich_triples(outer: Sequence[SemigroupElement], middle: Sequence[SemigroupElement],
                     cap: Optional[int] = None, rng: Optional[random.Random] = None) -> Iterator[Triple]:
    """Triples (x, s, y) with x, y from ``outer``; ``cap`` seeded samples when the full grid is larger."""
    if not outer or not middle:
        return iter(())
    if cap is None or len(outer) ** 2 * len(middle) <= cap:
        return itertools.product(outer, middle, outer)
    rng = rng or random.Random(0)
    logger.warning("%d sandwiches exceed %d: sampling", len(outer) ** 2 * len(middle), cap)
    return ((rng.choice(outer), rng.choice(middle), rng.choice(outer)) for _ in range(cap))


def fiber(system: DynamicalSystem, g: FreeGroupWord, max_len: int) -> List[SemigroupElement]:
    """Nonzero elements of grade ``g`` with |alpha| + |beta| ≤ max_len."""
    split = g.split()
    if split is None:
        return []
    p1, p2 = split
    budget = max_len - len(p1) - len(p2)
    if budget < 0:
        return []
    found: List[SemigroupElement] = []
    for p in enumerate_words(system, budget // 2):
        alpha, beta = p1 + p, p2 + p
        top = system.ideal_word(alpha).top & system.ideal_word(beta).top
        for A in system.algebra.members_below(top):
            if A:
                found.append(SemigroupElement(alpha, A, beta))
    return sorted(found, key=element_key)


def phi_conjugate(system: DynamicalSystem, g: FreeGroupWord, e: SemigroupElement) -> SemigroupElement:
    """Send (p1 p, A, p1 p) in E_g to (p2 p, A, p2 p) where g = p1 p2⁻¹."""
    if e.is_zero:
        return ZERO
    split = g.split()
    if split is None:
        raise NotInDomain(f"{g} is not of the form p1 p2^-1")
    p1, p2 = split
    if not e.is_idempotent or e.alpha[:len(p1)] != p1:
        raise NotInDomain(f"{e.render(system)} does not start with {format_word(p1)}")
    p = e.alpha[len(p1):]
    target = p2 + p
    if e.A not in system.ideal_word(target):
        raise NotInDomain(f"{system.format(e.A)} is not in I_{format_word(target)}")
    return SemigroupElement(target, e.A, target)


def grade_buckets(elements: Iterable[SemigroupElement]) -> Dict[FreeGroupWord, List[SemigroupElement]]:
    buckets: Dict[FreeGroupWord, List[SemigroupElement]] = {}
    for s in elements:
        if not s.is_zero:
            buckets.setdefault(grade(s), []).append(s)
    return buckets


def semi_saturation_failures(system: DynamicalSystem,
                             elements: Sequence[SemigroupElement]) -> List[Tuple[SemigroupElement, int]]:
    """Elements whose grade g·h (no cancellation) admits no factorization t·u within ``elements``."""
    buckets = grade_buckets(elements)
    failures: List[Tuple[SemigroupElement, int]] = []
    for s in elements:
        if s.is_zero:
            continue
        g = grade(s)
        for k in range(1, len(g)):
            left = FreeGroupWord(g.letters[:k])
            right = FreeGroupWord(g.letters[k:])
            if not any(
                multiply(system, t, u) == s
                for t in buckets.get(left, [])
                for u in buckets.get(right, [])
            ):
                failures.append((s, k))
    return failures


__all__ = [
    "SemigroupElement",
    "ZERO",
    "FreeGroupWord",
    "element",
    "element_key",
    "multiply",
    "star",
    "idempotent_leq",
    "natural_leq",
    "grade",
    "enumerate_words",
    "enumerate_elements",
    "idempotents",
    "sandwich_triples",
    "fiber",
    "phi_conjugate",
    "grade_buckets",
    "semi_saturation_failures",
]
