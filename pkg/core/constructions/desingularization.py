"""Desingularization: new letters b_1, b_2, ... and quotient levels B/X_i.

Elements of the desingularized algebra are finitely supported tuples
``([A_0]_0, [A_1]_1, ...)``.  Level ``i`` is the quotient of ``B`` by

    X_0 = X_1 = {∅},  X_i = {U : U has no sinks, Delta_U ⊆ {a_1, ..., a_{i-1}}}

so the chain stops growing at ``X_{n+1}`` for an alphabet of ``n`` letters.
``b_i`` moves level ``i-1`` to level ``i``; ``a_i`` sends level ``i`` back to
level ``0`` through ``theta_{a_i}``.  For the semigroup checks a finite
truncation (levels ``0..L``) is materialized as an ordinary system with
ground vertices ``v@i``.
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ..boolean_algebra import FiniteGBA, GbaIdeal, GbaMorphism, Member, QuotientGBA, quotient
from ..dynamical_system import DynamicalSystem, Word, validate_system
from ..errors import BoundTooSmall, GbdsError, InvalidElement, RelativeSystemUnsupported
from ..inverse_semigroup import (
    ZERO,
    SemigroupElement,
    element,
    enumerate_elements,
    idempotent_leq,
    idempotents,
    multiply,
    natural_leq,
    sandwich_triples,
)

logger = logging.getLogger(__name__)

# Truncations at most this large are validated member by member.
TRUNCATION_EXHAUSTIVE_LIMIT = 256


def b_letter(i: int) -> str:
    return f"b_{i}"


class Certificate(NamedTuple):
    level: int
    rep: Member
    letter: Optional[str]


@dataclass(frozen=True)
class Truncation:
    """Levels ``0..levels`` of the desingularized system as a finite system."""

    owner: "DesingularizedSystem"
    levels: int
    system: DynamicalSystem

    @property
    def width(self) -> int:
        return len(self.owner.base.algebra.ground)

    def shift(self, rep: Member, level: int) -> Member:
        return rep << (level * self.width)

    def component(self, member: Member, level: int) -> Member:
        return (member >> (level * self.width)) & ((1 << self.width) - 1)

    def support(self, member: Member) -> List[int]:
        return [i for i in range(self.levels + 1) if self.component(member, i)]

    def embed(self, s: SemigroupElement, letter_map: Callable[[Word], Word]) -> SemigroupElement:
        if s.is_zero:
            return ZERO
        return SemigroupElement(letter_map(s.alpha), self.shift(s.A, 0), letter_map(s.beta))


@dataclass(frozen=True)
class DesingularizedSystem:
    base: DynamicalSystem
    x_chain: Tuple[GbaIdeal, ...]

    @property
    def n(self) -> int:
        return len(self.base.alphabet)

    def x_ideal(self, i: int) -> GbaIdeal:
        return self.x_chain[min(i, len(self.x_chain) - 1)]

    def level(self, i: int) -> QuotientGBA:
        return quotient(self.base.algebra, self.x_ideal(i))

    def letter_index(self, letter: str) -> int:
        """1-based position of an original letter."""
        return self.base.alphabet.index(letter) + 1

    @property
    def stabilization_index(self) -> int:
        last = self.x_chain[-1].top
        return next(i for i, x in enumerate(self.x_chain) if x.top == last)

    def level_delta(self, i: int, rep: Member) -> FrozenSet[str]:
        rep &= ~self.x_ideal(i).top
        letters = set()
        if not rep:
            return frozenset()
        if rep & ~self.x_ideal(i + 1).top:
            letters.add(b_letter(i + 1))
        if 1 <= i <= self.n:
            a = self.base.alphabet[i - 1]
            if self.base.theta[a](rep):
                letters.add(a)
        return frozenset(letters)

    def certificate(self, i: int, rep: Member) -> Optional[str]:
        letters = self.level_delta(i, rep)
        if b_letter(i + 1) in letters:
            return b_letter(i + 1)
        if 1 <= i <= self.n and self.base.alphabet[i - 1] in letters:
            return self.base.alphabet[i - 1]
        return None

    def certificates(self, max_level: int) -> List[Certificate]:
        """A Delta letter for every nonzero class at levels 0..max_level."""
        found = []
        for i in range(max_level + 1):
            for rep in self.level(i).as_gba.members:
                if rep:
                    found.append(Certificate(i, rep, self.certificate(i, rep)))
        return found

    def uncertified(self, max_level: int) -> List[Certificate]:
        return [c for c in self.certificates(max_level) if c.letter is None]

    def format_class(self, i: int, rep: Member) -> str:
        return f"{self.level(i).format(rep)}_{i}"

    def truncation(self, levels: int) -> Truncation:
        base = self.base
        ground = base.algebra.ground
        width = len(ground)
        names = tuple(f"{v}@{i}" for i in range(levels + 1) for v in ground)

        def shift(rep: Member, level: int) -> Member:
            return rep << (level * width)

        level_atoms = [self.level(i).as_gba.atoms for i in range(levels + 1)]
        carrier = FiniteGBA.from_atoms(names, [shift(c, i) for i, atoms in enumerate(level_atoms) for c in atoms])

        theta: Dict[str, GbaMorphism] = {}
        ideals: Dict[str, GbaIdeal] = {}
        for j, a in enumerate(base.alphabet, start=1):
            images = {}
            if j <= levels:
                for c in level_atoms[j]:
                    images[shift(c, j)] = base.theta[a](c)
            theta[a] = GbaMorphism(carrier, carrier, {atom: images.get(atom, 0) for atom in carrier.atoms})
            ideals[a] = GbaIdeal(carrier, base.ideals[a].top)
        for i in range(1, levels + 1):
            cut = ~self.x_ideal(i).top
            images = {shift(c, i - 1): shift(c & cut, i) for c in level_atoms[i - 1]}
            letter = b_letter(i)
            theta[letter] = GbaMorphism(carrier, carrier, {atom: images.get(atom, 0) for atom in carrier.atoms})
            ideals[letter] = GbaIdeal(carrier, shift(base.algebra.top & cut, i))
        alphabet = base.alphabet + tuple(b_letter(i) for i in range(1, levels + 1))
        system = validate_system(carrier, alphabet, theta, ideals,
                                 exhaustive_limit=TRUNCATION_EXHAUSTIVE_LIMIT)
        logger.info("truncated desingularization: levels 0..%d, %d atoms", levels, len(carrier.atoms))
        return Truncation(self, levels, system)


def _x_chain(system: DynamicalSystem) -> Tuple[GbaIdeal, ...]:
    gba = system.algebra
    sinks = system.sink_sets.top
    chain = [GbaIdeal(gba, 0), GbaIdeal(gba, 0)]
    for i in range(2, len(system.alphabet) + 2):
        allowed = set(system.alphabet[: i - 1])
        top = 0
        for atom in gba.atoms:
            if not atom & sinks and system.delta(atom) <= allowed:
                top |= atom
        chain.append(GbaIdeal(gba, top))
    return tuple(chain)


def desingularize(system: DynamicalSystem) -> DesingularizedSystem:
    if system.is_relative:
        raise RelativeSystemUnsupported("desingularize")
    clash = [a for a in system.alphabet if re.fullmatch(r"b_\d+", a)]
    if clash:
        raise GbdsError(f"letter {clash[0]} is reserved for the desingularization")
    desing = DesingularizedSystem(system, _x_chain(system))
    logger.info("X chain: %s", ", ".join(system.format(x.top) for x in desing.x_chain))
    return desing


def h_embed(word: Sequence[str], alphabet: Sequence[str]) -> Word:
    """a_i -> b_1 ... b_i a_i, letter by letter."""
    out: List[str] = []
    for letter in word:
        i = list(alphabet).index(letter) + 1
        out.extend(b_letter(k) for k in range(1, i + 1))
        out.append(letter)
    return tuple(out)


def _preimage(word: Word, images: Mapping[str, Word]) -> Optional[Word]:
    """Read ``word`` as a concatenation of letter images (a prefix code)."""
    out: List[str] = []
    rest = word
    while rest:
        for letter, image in images.items():
            if image and rest[: len(image)] == image:
                out.append(letter)
                rest = rest[len(image):]
                break
        else:
            return None
    return tuple(out)


def _split_tail(desing: DesingularizedSystem, word: Word) -> Optional[Tuple[Word, int]]:
    """word = h(alpha') b_1 ... b_k; returns (alpha', k) or None."""
    alphabet = desing.base.alphabet
    prefix: List[str] = []
    run = 0
    for letter in word:
        if letter == b_letter(run + 1):
            run += 1
        elif letter in alphabet and desing.letter_index(letter) == run:
            prefix.append(letter)
            run = 0
        else:
            return None
    return tuple(prefix), run


@dataclass
class EmbeddingReport:
    bound: int
    checked: Dict[str, int] = field(default_factory=dict)
    counterexamples: Dict[str, List[str]] = field(default_factory=dict)

    FAMILIES = ("morphism", "membership", "cover_and_tightness", "sandwich", "full_ideal")

    @property
    def passed(self) -> bool:
        return not any(self.counterexamples.values())

    def note(self, family: str, witness: Optional[str] = None) -> None:
        self.checked[family] = self.checked.get(family, 0) + 1
        bucket = self.counterexamples.setdefault(family, [])
        if witness is not None:
            bucket.append(witness)

    def rows(self) -> List[Dict[str, object]]:
        return [
            {
                "family": family,
                "checked": self.checked.get(family, 0),
                "counterexamples": len(self.counterexamples.get(family, [])),
                "first": (self.counterexamples.get(family) or [""])[0],
            }
            for family in self.FAMILIES
        ]


class _EmbeddingCheck:
    def __init__(self, system: DynamicalSystem, bound: int, letter_map: Optional[Mapping[str, Word]],
                 member_limit: int, sandwich_bound: int, max_tuples: Optional[int] = None,
                 rng: Optional[random.Random] = None):
        self.max_tuples = max_tuples
        self.rng = rng
        self.base = system
        self.desing = desingularize(system)
        self.bound = bound
        self.sandwich_bound = min(sandwich_bound, bound)
        self.member_limit = member_limit
        self.trunc = self.desing.truncation(max(bound, self.desing.n + 1) + 1)
        self.big = self.trunc.system
        alphabet = system.alphabet
        self.images = dict(letter_map) if letter_map is not None else {
            a: h_embed((a,), alphabet) for a in alphabet
        }
        self.report = EmbeddingReport(bound)

    def h(self, word: Sequence[str]) -> Word:
        out: List[str] = []
        for letter in word:
            out.extend(self.images[letter])
        return tuple(out)

    def iota(self, s: SemigroupElement) -> SemigroupElement:
        return self.trunc.embed(s, self.h)

    def render_big(self, s: SemigroupElement) -> str:
        return s.render(self.big)

    def valid_big(self, s: SemigroupElement) -> bool:
        try:
            element(self.big, s.alpha, s.A, s.beta)
        except (InvalidElement, GbdsError):
            return False
        return True

    @cached_property
    def small(self) -> List[SemigroupElement]:
        return enumerate_elements(self.base, self.bound, include_zero=True)

    @cached_property
    def large(self) -> List[SemigroupElement]:
        return enumerate_elements(self.big, self.bound, member_limit=self.member_limit)

    @cached_property
    def image_set(self) -> Dict[SemigroupElement, SemigroupElement]:
        return {self.iota(s): s for s in self.small if not s.is_zero}

    def in_image_form(self, s: SemigroupElement) -> bool:
        """Shape of the idempotents that are images: level 0 sets under words starting with b_1."""
        level0 = (1 << self.trunc.width) - 1
        starts = all(not w or w[0] == b_letter(1) for w in (s.alpha, s.beta))
        return s.A & ~level0 == 0 and starts

    def has_image_above(self, s: SemigroupElement) -> bool:
        """An image idempotent lies above (alpha, A, alpha) iff alpha = ω with A at level 0, or alpha_1 = b_1."""
        if not s.alpha:
            return s.A & ~((1 << self.trunc.width) - 1) == 0
        return s.alpha[0] == b_letter(1)

    # --- families --------------------------------------------------------

    def check_morphism(self) -> None:
        seen: Dict[SemigroupElement, SemigroupElement] = {}
        for s in self.small:
            image = self.iota(s)
            if not s.is_zero and not self.valid_big(image):
                self.report.note("morphism", f"ι{s.render(self.base)} = {self.render_big(image)} is not an element")
                continue
            other = seen.setdefault(image, s)
            if other != s:
                self.report.note("morphism", f"ι identifies {s.render(self.base)} and {other.render(self.base)}")
        for s in self.small:
            for t in self.small:
                lhs = self.iota(multiply(self.base, s, t))
                rhs = multiply(self.big, self.iota(s), self.iota(t))
                if lhs != rhs:
                    self.report.note("morphism", f"ι({s.render(self.base)}·{t.render(self.base)}) = "
                                                 f"{self.render_big(lhs)} but ι·ι = {self.render_big(rhs)}")
                else:
                    self.report.note("morphism")

    def check_membership(self) -> None:
        for e in self.large:
            expected = self.in_image_form(e)
            actual = e in self.image_set
            if expected != actual:
                self.report.note("membership", f"{self.render_big(e)}: form {expected}, image {actual}")
            else:
                self.report.note("membership")

    def _below(self, y: SemigroupElement, pool: Sequence[SemigroupElement]) -> List[SemigroupElement]:
        return [z for z in pool if idempotent_leq(self.big, z, y)]

    def _image_above(self, e: SemigroupElement) -> Optional[SemigroupElement]:
        """The largest image idempotent above ``e`` with a given word, for each prefix of e's word."""
        big = self.big
        level0 = (1 << self.trunc.width) - 1
        for cut in range(len(e.alpha), -1, -1):
            word = e.alpha[:cut]
            if _preimage(word, self.images) is None:
                continue
            top = big.ideal_word(word).top & level0
            if not top:
                continue
            f = SemigroupElement(word, top, word)
            if idempotent_leq(big, e, f):
                return f
        return None

    def check_covers(self) -> None:
        big, desing = self.big, self.desing
        pool = [e for e in idempotents(self.large) if not e.is_zero]
        for e in pool:
            has_above = self._image_above(e) is not None
            expected = self.has_image_above(e)
            if has_above != expected:
                self.report.note("cover_and_tightness",
                                 f"{self.render_big(e)}: above {has_above}, expected {expected}")
                continue
            if not has_above or e in self.image_set:
                self.report.note("cover_and_tightness")
                continue
            split = _split_tail(desing, e.alpha)
            if split is None or split[1] == 0:
                self.report.note("cover_and_tightness", f"{self.render_big(e)} is not h(α')b_1..b_k")
                continue
            prefix, k = split
            A = self.trunc.component(e.A, k)
            if e.A != self.trunc.shift(A, k):
                self.report.note("cover_and_tightness", f"{self.render_big(e)} spans several levels")
                continue
            self.report.note("cover_and_tightness", self._cover_witness(e, prefix, k, A, pool))
            self.report.note("cover_and_tightness", self._tightness_witness(e, prefix, k, A, pool))

    def _cover_witness(self, e, prefix: Word, k: int, A: Member, pool) -> Optional[str]:
        big, base = self.big, self.base
        for j in range(max(k, 1), self.desing.n + 1):
            a = base.alphabet[j - 1]
            image = base.theta[a](A & ~self.desing.x_ideal(j).top)
            if image:
                word = self.h(prefix + (a,))
                f = SemigroupElement(word, image, word)
                if self.valid_big(f) and idempotent_leq(big, f, e):
                    return None
                return f"below-witness {self.render_big(f)} of {self.render_big(e)} fails"
        sinks = A & base.sink_sets.top
        if not sinks:
            return f"{self.render_big(e)}: no letter a_j (j ≥ {k}) and no sink part"
        word = self.h(prefix)
        y = SemigroupElement(word, sinks, word)
        if multiply(big, y, e).is_zero:
            return f"sink witness {self.render_big(y)} misses {self.render_big(e)}"
        for z in self._below(y, pool):
            if multiply(big, z, e).is_zero:
                return f"{self.render_big(z)} ≤ {self.render_big(y)} avoids {self.render_big(e)}"
        return None

    def _tightness_witness(self, e, prefix: Word, k: int, A: Member, pool) -> Optional[str]:
        big, base = self.big, self.base
        word = self.h(prefix)
        y = SemigroupElement(word, A, word)
        if not self.valid_big(y) or not idempotent_leq(big, e, y):
            return f"{self.render_big(y)} is not an image above {self.render_big(e)}"
        pieces = []
        for i in range(1, k):
            a = base.alphabet[i - 1]
            image = base.theta[a](A)
            if image:
                w = self.h(prefix + (a,))
                y_i = SemigroupElement(w, image, w)
                if not idempotent_leq(big, y_i, y) or not multiply(big, y_i, e).is_zero:
                    return f"y_{i} = {self.render_big(y_i)} is not a disjoint piece below {self.render_big(y)}"
                pieces.append(y_i)
        for z in self._below(y, pool):
            if multiply(big, z, e).is_zero and all(multiply(big, z, p).is_zero for p in pieces):
                return f"{self.render_big(z)} ≤ {self.render_big(y)} meets neither e nor any y_i"
        return None

    def check_sandwich(self) -> None:
        big = self.big
        small_idem = [s for s in enumerate_elements(self.base, self.sandwich_bound) if s.is_idempotent]
        outer = [self.iota(s) for s in small_idem]
        middle = enumerate_elements(big, self.sandwich_bound, member_limit=self.member_limit)
        left: Dict[Tuple[SemigroupElement, SemigroupElement], SemigroupElement] = {}
        for x, s, y in sandwich_triples(outer, middle, self.max_tuples, self.rng):
            xs = left.get((x, s))
            if xs is None:
                xs = left[(x, s)] = multiply(big, x, s)
            if xs.is_zero:
                continue
            t = multiply(big, xs, y)
            if t.is_zero:
                continue
            if self._upper_image(t) is None:
                self.report.note("sandwich", f"{self.render_big(t)} has no image above it")
            else:
                self.report.note("sandwich")

    def _upper_image(self, t: SemigroupElement) -> Optional[SemigroupElement]:
        """An element of ι(S_1) above ``t`` in the natural order, found by peeling a common suffix."""
        big = self.big
        gamma, delta = t.alpha, t.beta
        for r in range(min(len(gamma), len(delta)) + 1):
            if r and gamma[len(gamma) - r:] != delta[len(delta) - r:]:
                break
            g0, d0 = gamma[: len(gamma) - r], delta[: len(delta) - r]
            if _preimage(g0, self.images) is None or _preimage(d0, self.images) is None:
                continue
            top = big.ideal_word(g0).top & big.ideal_word(d0).top
            if not top:
                continue
            candidate = SemigroupElement(g0, top, d0)
            if natural_leq(big, t, candidate):
                return candidate
        return None

    def check_full_ideal(self) -> None:
        big = self.big
        reached = self.trunc.shift(self.base.algebra.top, 0)
        while True:
            grown = reached
            for letter in big.alphabet:
                grown |= big.theta[letter](grown)
            if grown == reached:
                break
            reached = grown
        if reached != big.algebra.top:
            self.report.note("full_ideal", f"closure of level 0 stops at {big.format(reached)}")
        else:
            self.report.note("full_ideal")

    def run(self) -> EmbeddingReport:
        self.check_morphism()
        self.check_membership()
        self.check_covers()
        self.check_sandwich()
        self.check_full_ideal()
        logger.info("embedding conditions at bound %d: %s", self.bound,
                    {k: len(v) for k, v in self.report.counterexamples.items()})
        return self.report


def check_embedding_conditions(system: DynamicalSystem, bound: int,
                               letter_map: Optional[Mapping[str, Word]] = None,
                               member_limit: int = 64, sandwich_bound: int = 4,
                               max_tuples: Optional[int] = None,
                               rng: Optional[random.Random] = None) -> EmbeddingReport:
    """Bounded checks that (alpha, A, beta) -> (h(alpha), [A]_0, h(beta)) embeds S(system)."""
    needed = len(system.alphabet) + 1
    if bound < needed:
        raise BoundTooSmall(bound, needed)
    return _EmbeddingCheck(system, bound, letter_map, member_limit, sandwich_bound, max_tuples, rng).run()


def identity_letter_map(system: DynamicalSystem) -> Dict[str, Word]:
    """Letters sent to themselves; the embedding checks must reject it."""
    return {a: (a,) for a in system.alphabet}


__all__ = [
    "Certificate",
    "DesingularizedSystem",
    "Truncation",
    "EmbeddingReport",
    "b_letter",
    "desingularize",
    "h_embed",
    "check_embedding_conditions",
    "identity_letter_map",
]
