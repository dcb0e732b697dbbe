"""Ideal expansion: the same system with every I_a enlarged to all of B."""

from __future__ import annotations

import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..boolean_algebra import whole_ideal
from ..dynamical_system import DynamicalSystem, Word
from ..errors import GbdsError
from ..inverse_semigroup import (
    SemigroupElement,
    element,
    enumerate_elements,
    idempotent_leq,
    multiply,
    sandwich_triples,
    star,
)

logger = logging.getLogger(__name__)


def expand_ideals_to_full(system: DynamicalSystem) -> DynamicalSystem:
    full = whole_ideal(system.algebra)
    return system.with_ideals({a: full for a in system.alphabet})


@dataclass
class ExpansionReport:
    bound: int
    checked: Dict[str, int] = field(default_factory=dict)
    counterexamples: Dict[str, List[str]] = field(default_factory=dict)

    FAMILIES = ("inclusion", "hereditary", "corner", "generation")

    @property
    def passed(self) -> bool:
        return not any(self.counterexamples.values())

    def note(self, family: str, witness: Optional[str] = None) -> None:
        self.checked[family] = self.checked.get(family, 0) + 1
        bucket = self.counterexamples.setdefault(family, [])
        if witness is not None:
            bucket.append(witness)


def _belongs(system: DynamicalSystem, s: SemigroupElement) -> bool:
    try:
        element(system, s.alpha, s.A, s.beta)
    except GbdsError:
        return False
    return True


def unreached_idempotents(expanded: DynamicalSystem, elements: Sequence[SemigroupElement],
                          generators: Sequence[SemigroupElement]) -> List[SemigroupElement]:
    """Idempotents of ``elements`` that are no product s e s* with s in ``elements`` and e in ``generators``."""
    by_word: Dict[Word, List[SemigroupElement]] = defaultdict(list)
    for e in generators:
        by_word[e.alpha].append(e)
    by_range: Dict[Word, List[SemigroupElement]] = defaultdict(list)
    for s in elements:
        if not s.is_zero:
            by_range[s.alpha].append(s)
    missing = []
    for f in elements:
        if f.is_zero or not f.is_idempotent:
            continue
        reached = any(
            multiply(expanded, multiply(expanded, s, e), star(s)) == f
            for s in by_range[f.alpha]
            for e in by_word[s.beta]
        )
        if not reached:
            missing.append(f)
    return missing


def check_ideal_expansion(system: DynamicalSystem, bound: int, corner_bound: int = 4,
                          member_limit: Optional[int] = None, max_tuples: Optional[int] = None,
                          rng: Optional[random.Random] = None) -> ExpansionReport:
    """Bounded checks that S(system) sits in S(expanded) as a full hereditary corner."""
    expanded = expand_ideals_to_full(system)
    report = ExpansionReport(bound)
    small = enumerate_elements(system, bound, member_limit=member_limit)
    large = enumerate_elements(expanded, bound, member_limit=member_limit)

    for s in small:
        report.note("inclusion", None if _belongs(expanded, s) else f"{s.render(system)} is not in the expansion")

    small_idem = [e for e in small if e.is_idempotent]
    large_idem = [f for f in large if f.is_idempotent]
    for e in small_idem:
        for f in large_idem:
            if idempotent_leq(expanded, f, e):
                witness = None if _belongs(system, f) else f"{f.render(expanded)} ≤ {e.render(system)}"
                report.note("hereditary", witness)

    corner_small = [e for e in small_idem if e.length() <= corner_bound]
    corner_large = [s for s in large if s.length() <= corner_bound]
    left: Dict[Tuple[SemigroupElement, SemigroupElement], SemigroupElement] = {}
    for e, s, f in sandwich_triples(corner_small, corner_large, max_tuples, rng):
        es = left.get((e, s))
        if es is None:
            es = left[(e, s)] = multiply(expanded, e, s)
        if es.is_zero:
            continue
        t = multiply(expanded, es, f)
        if not t.is_zero:
            report.note("corner", None if _belongs(system, t) else f"{t.render(expanded)} leaves S")

    missing = set(unreached_idempotents(expanded, large, small_idem))
    for f in large_idem:
        report.note("generation", f"{f.render(expanded)} is not s e s* with e ∈ E(S)" if f in missing else None)

    logger.info("ideal expansion at bound %d: %s", bound,
                {k: len(v) for k, v in report.counterexamples.items()})
    return report


__all__ = ["ExpansionReport", "expand_ideals_to_full", "check_ideal_expansion", "unreached_idempotents"]
