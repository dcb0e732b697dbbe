"""Invariant suites run by ``gbds-lab verify``.

Each suite takes a validated system and returns a list of ``CheckResult``;
a check fails when it collects at least one counterexample.  Exhaustive
loops fall back to a seeded sample once they exceed ``max_tuples``.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, replace
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from core.boolean_algebra import quotient, validate_gba, validate_morphism
from core.coefficients import INTEGERS, CoefficientRing, ModularRing
from core.constructions import (
    TildeMaps,
    admissible_pairs,
    check_embedding_conditions,
    check_ideal_expansion,
    desingularize,
    hereditary_saturated_closure,
    ideal_generators,
    identity_letter_map,
    is_hereditary,
    is_saturated,
    kernel_failures,
    tilde_system,
)
from core.dynamical_system import EMPTY_WORD, DynamicalSystem, format_word, validate_system
from core.errors import BadMorphism, BoundTooSmall, GbdsError, NotInDomain, ValidationFailure
from core.inverse_semigroup import (
    SemigroupElement,
    enumerate_elements,
    enumerate_words,
    fiber,
    grade,
    grade_buckets,
    idempotent_leq,
    multiply,
    natural_leq,
    phi_conjugate,
    semi_saturation_failures,
    star,
)
from core.skew_algebra import (
    SystemAlgebra,
    ann_closed_forms,
    ann_intersection_trivial,
    relation_residues,
)
from core.stone_dual import (
    filters,
    find_isomorphism,
    is_filter,
    is_isomorphism,
    labelled_to_gbds,
    round_trip_map,
    stone_graph,
    validate_labelled_space,
    duality_failures,
)
from modules.random_systems import random_system, random_system_seeds
from modules.reports import CheckResult

logger = logging.getLogger(__name__)


@dataclass
class VerificationSettings:
    bound: int = 6
    member_limit: int = 64
    exhaustive_member_limit: int = 4096
    local_unit_generator_limit: int = 12
    sandwich_bound: int = 4
    grading_pairs: int = 10000
    rewrite_schedules: int = 50
    rewrite_elements: int = 1000
    max_tuples: int = 2_000_000
    extra_levels: int = 3
    random_systems: int = 100
    random_member_limit: int = 8
    random_max_tuples: int = 20000
    max_ground: int = 4
    max_letters: int = 3

    @classmethod
    def from_config(cls, config: Mapping[str, Any], bound: Optional[int] = None) -> "VerificationSettings":
        section = dict(config.get("verification", {}))
        known = {k: v for k, v in section.items() if k in cls.__dataclass_fields__}
        settings = cls(**known)
        settings.extra_levels = config.get("desingularization", {}).get("extra_levels", settings.extra_levels)
        settings.bound = bound if bound is not None else config.get("cli", {}).get("default_bound", settings.bound)
        return settings


def _note(result: CheckResult, witness: Optional[str] = None) -> None:
    result.checked += 1
    if witness is not None:
        result.counterexamples.append(witness)


def _tuples(items: Sequence, arity: int, cap: int, rng: random.Random) -> Iterator[Tuple]:
    """All ``arity``-tuples of ``items``, or ``cap`` sampled ones when there are more."""
    if not items:
        return iter(())
    if len(items) ** arity <= cap:
        return itertools.product(items, repeat=arity)
    logger.warning("%d^%d tuples exceed %d: sampling", len(items), arity, cap)
    return (tuple(rng.choice(items) for _ in range(arity)) for _ in range(cap))


def nonzero_scalars(ring: CoefficientRing) -> List[int]:
    if isinstance(ring, ModularRing):
        return list(range(1, ring.modulus))
    return [1, -1, 2, -3]


# --- gba / gbds ----------------------------------------------------------

def gba_checks(system: DynamicalSystem, settings: VerificationSettings) -> List[CheckResult]:
    gba = system.algebra
    closure = CheckResult("gba.closure")
    if gba.size <= settings.exhaustive_member_limit:
        members = set(gba.members)
        for A in gba.members:
            for B in gba.members:
                missing = [op for op, value in (("∪", A | B), ("∩", A & B), ("\\", A & ~B)) if value not in members]
                _note(closure, f"{gba.format(A)} {missing[0]} {gba.format(B)}" if missing else None)

    morphisms = CheckResult("gba.morphisms")
    for letter in system.alphabet:
        try:
            validate_morphism(system.theta[letter], letter, settings.exhaustive_member_limit)
            _note(morphisms)
        except BadMorphism as exc:
            _note(morphisms, str(exc))

    quotients = CheckResult("gba.quotients")
    named = [(f"I_{a}", system.ideals[a]) for a in system.alphabet] + [("J", system.relative_ideal)]
    for name, ideal in named:
        q = quotient(gba, ideal)
        outside = len([c for c in gba.atoms if c & ~ideal.top])
        try:
            validate_gba(gba.ground, q.as_gba.members)
        except GbdsError as exc:
            _note(quotients, f"B/{name}: {exc}")
            continue
        _note(quotients, None if len(q.classes) == 2 ** outside else f"B/{name} has {len(q.classes)} classes")
    return [closure, morphisms, quotients]


def gbds_checks(system: DynamicalSystem, settings: VerificationSettings) -> List[CheckResult]:
    gba = system.algebra
    fmt = system.format
    ideals = CheckResult("gbds.ideals")
    for a in system.alphabet:
        _note(ideals, None if system.minimal_ideal(a).issubset(system.ideals[a]) else f"F_{a} ⊄ I_{a}")
    _note(ideals, None if system.relative_ideal.issubset(system.regular_sets) else "J ⊄ B_reg")

    classification = CheckResult("gbds.classification")
    delta_join = CheckResult("gbds.delta_join")
    members = gba.members[: settings.member_limit]
    for A in members:
        kind, sink = system.classify(A)
        regular = A & ~system.regular_sets.top == 0
        consistent = (kind == "regular") == regular and sink == (not system.delta(A))
        _note(classification, None if consistent else f"{fmt(A)} classified {kind}")
        for B in members:
            if system.delta(A | B) != system.delta(A) | system.delta(B):
                _note(delta_join, f"Δ{fmt(A | B)} ≠ Δ{fmt(A)} ∪ Δ{fmt(B)}")
            else:
                _note(delta_join)

    recursion = CheckResult("gbds.ideal_recursion")
    for word in enumerate_words(system, min(settings.bound, 4)):
        for a in system.alphabet:
            expected = system.extend_ideal(system.ideal_word(word), a)
            actual = system.ideal_word(word + (a,))
            _note(recursion, None if expected.top == actual.top else f"I_{format_word(word + (a,))}")
    return [ideals, classification, delta_join, recursion]


# --- inverse semigroup ---------------------------------------------------

def semigroup_checks(system: DynamicalSystem, bound: int, member_limit: int, max_tuples: int,
                     rng: random.Random) -> List[CheckResult]:
    elements = enumerate_elements(system, bound, include_zero=True, member_limit=member_limit)
    nonzero = [s for s in elements if not s.is_zero]
    idem = [e for e in elements if e.is_idempotent]
    render = lambda s: s.render(system)  # noqa: E731

    products: Dict[Tuple[SemigroupElement, SemigroupElement], SemigroupElement] = {}

    def mul(s: SemigroupElement, t: SemigroupElement) -> SemigroupElement:
        key = (s, t)
        if key not in products:
            products[key] = multiply(system, s, t)
        return products[key]

    associativity = CheckResult("semigroup.associativity")
    for s, t, u in _tuples(elements, 3, max_tuples, rng):
        left, right = mul(mul(s, t), u), mul(s, mul(t, u))
        _note(associativity, None if left == right else f"({render(s)} {render(t)}) {render(u)}")

    involution = CheckResult("semigroup.involution")
    grading = CheckResult("semigroup.grading")
    for s, t in _tuples(elements, 2, max_tuples, rng):
        st = mul(s, t)
        _note(involution, None if star(st) == mul(star(t), star(s)) else f"({render(s)} {render(t)})*")
        if not st.is_zero:
            _note(grading, None if grade(st) == grade(s) * grade(t) else f"grade({render(s)} {render(t)})")
    for s in elements:
        _note(involution, None if star(star(s)) == s else f"{render(s)}**")

    commuting = CheckResult("semigroup.idempotents_commute")
    order = CheckResult("semigroup.idempotent_order")
    for e, f in _tuples(idem, 2, max_tuples, rng):
        _note(commuting, None if mul(e, f) == mul(f, e) else f"{render(e)}, {render(f)}")
        same = idempotent_leq(system, e, f) == natural_leq(system, e, f)
        _note(order, None if same else f"{render(e)} ≤ {render(f)}")

    unitary = CheckResult("semigroup.e_star_unitary")
    for s in nonzero:
        if grade(s).is_identity:
            _note(unitary, None if s.is_idempotent else f"{render(s)} has grade e")
    below = [e for e in idem if not e.is_zero]
    for e, s in _tuples(below + nonzero, 2, max_tuples, rng):
        if e.is_idempotent and not e.is_zero and not s.is_zero and natural_leq(system, e, s):
            _note(unitary, None if s.is_idempotent else f"{render(e)} ≤ {render(s)}")

    fibers = CheckResult("semigroup.fibers")
    conjugation = CheckResult("semigroup.conjugation")
    for g, bucket in grade_buckets(nonzero).items():
        members = set(fiber(system, g, bound))
        for s in bucket:
            _note(fibers, None if s in members else f"{render(s)} ∉ fiber({g})")
        for t in members:
            _note(fibers, None if grade(t) == g else f"{render(t)} in fiber({g})")
        for s in bucket:
            try:
                image = phi_conjugate(system, g, mul(s, star(s)))
            except NotInDomain as exc:
                _note(conjugation, f"{render(s)}: {exc}")
                continue
            _note(conjugation, None if image == mul(star(s), s) else f"φ_{g}({render(s)}{render(s)}*)")

    saturation = CheckResult("semigroup.semi_saturation")
    failures = semi_saturation_failures(system, nonzero)
    saturation.checked = len(nonzero)
    saturation.counterexamples = [f"{render(s)} at split {k}" for s, k in failures]
    logger.info("semigroup suite: %d elements, %d cached products", len(elements), len(products))
    return [associativity, involution, grading, commuting, order, unitary, fibers, conjugation, saturation]


# --- algebra -------------------------------------------------------------

def relation_checks(algebra: SystemAlgebra, word_len: int, member_limit: int) -> CheckResult:
    result = CheckResult("algebra.relations")
    for label, residue in relation_residues(algebra, word_len, member_limit):
        _note(result, None if residue == 0 else f"{label}: residue {residue.render()}")
    return result


def nonzero_checks(algebra: SystemAlgebra, word_len: int, member_limit: int) -> CheckResult:
    system = algebra.system
    fmt = system.format
    result = CheckResult("algebra.nonzero")
    scalars = nonzero_scalars(algebra.ring)
    members = [A for A in system.algebra.members[:member_limit] if A]
    words = [w for w in enumerate_words(system, word_len) if w]
    for r in scalars:
        for A in members:
            _note(result, None if r * algebra.inject_p(A) != 0 else f"{r}·p{fmt(A)} = 0")
        for word in words:
            for A in system.ideal_word(word).members[:member_limit]:
                if A:
                    x = r * algebra.inject_s_word(word, A)
                    _note(result, None if x != 0 else f"{r}·s{{{format_word(word)},{fmt(A)}}} = 0")
        for B in system.regular_sets.members[:member_limit]:
            if B & ~system.relative_ideal.top:
                _note(result, None if r * algebra.q_element(B) != 0 else f"{r}·q{fmt(B)} = 0")
    return result


def annihilator_checks(algebra: SystemAlgebra, settings: VerificationSettings) -> List[CheckResult]:
    system = algebra.system
    basis = CheckResult("algebra.annihilators")
    ann = perp = None
    if not system.is_relative:
        try:
            ann, perp = algebra.ann_basis()
        except GbdsError as exc:
            _note(basis, f"linear solve: {exc}")
    if ann is not None:
        closed_ann, closed_perp = ann_closed_forms(system)
        _note(basis, None if ann == closed_ann else "Ann_S(I) differs from the sink projections")
        _note(basis, None if perp == closed_perp else "Ann⊥ differs from the non-sink projections")
        _note(basis, None if ann_intersection_trivial(system, ann, perp) else "Ann ∩ Ann⊥ ≠ {0}")

    units = CheckResult("algebra.local_units")
    gens = [
        (a, d)
        for a in system.alphabet
        for d in system.algebra.atoms_below(system.ideals[a].top)
    ][: settings.local_unit_generator_limit]
    for size in range(1, len(gens) + 1):
        for subset in itertools.combinations(gens, size):
            unit = algebra.local_unit(subset)
            for a, d in subset:
                g = algebra.monomial((a,), d, EMPTY_WORD)
                ok = unit * g == g and g.star() * unit == g.star()
                _note(units, None if ok else f"s{{{a},{system.format(d)}}} against {len(subset)} generators")
    return [basis, units]


def grading_checks(algebra: SystemAlgebra, bound: int, pairs: int, rng: random.Random) -> CheckResult:
    result = CheckResult("algebra.grading")
    pool = algebra.basis_monomials(bound)
    if not pool:
        return result
    for _ in range(pairs):
        m1, m2 = rng.choice(pool), rng.choice(pool)
        x, y = algebra.element({m1: 1}), algebra.element({m2: 1})
        product = x * y
        degree = (len(m1.alpha) - len(m1.beta)) + (len(m2.alpha) - len(m2.beta))
        parts = algebra.z_components(product)
        bad = [d for d in parts if d != degree]
        recombined = algebra.zero()
        for part in parts.values():
            recombined = recombined + part
        if bad or recombined != product:
            _note(result, f"{x.render()} * {y.render()} has degrees {sorted(parts)}, expected {degree}")
        else:
            _note(result)
    return result


def confluence_checks(algebra: SystemAlgebra, bound: int, elements: int, schedules: int,
                      rng: random.Random) -> CheckResult:
    result = CheckResult("algebra.confluence")
    raw = algebra.raw_monomials(bound)
    forbidden = algebra.forbidden_monomials(bound)
    if not raw:
        return result
    for _ in range(elements):
        terms: Dict[SemigroupElement, int] = {}
        for _ in range(rng.randint(1, 4)):
            source = forbidden if forbidden and rng.random() < 0.5 else raw
            m = rng.choice(source)
            terms[m] = terms.get(m, 0) + rng.choice((-3, -2, -1, 1, 2, 3))
        baseline = algebra.normalize(terms)
        for _ in range(schedules):
            scheduled = algebra.normalize(terms, rng=random.Random(rng.randrange(2**31)))
            if scheduled != baseline:
                _note(result, f"{algebra.element(terms).render()}: schedules disagree")
                break
            _note(result)
    return result


def algebra_checks(system: DynamicalSystem, ring: CoefficientRing, settings: VerificationSettings,
                   rng: random.Random) -> List[CheckResult]:
    algebra = SystemAlgebra(system, ring)
    word_len = min(settings.bound, 2)
    small = min(settings.bound, 4)
    return [
        relation_checks(algebra, word_len, settings.member_limit),
        nonzero_checks(algebra, word_len, settings.member_limit),
        *annihilator_checks(algebra, settings),
        grading_checks(algebra, small, settings.grading_pairs, rng),
        confluence_checks(algebra, small, settings.rewrite_elements, settings.rewrite_schedules, rng),
    ]


# --- constructions -------------------------------------------------------

def tilde_checks(system: DynamicalSystem, ring: CoefficientRing = INTEGERS) -> List[CheckResult]:
    tilde = tilde_system(system)
    regular = CheckResult("tilde.regular_sets")
    _note(regular, None if tilde.regular_sets_match else
          f"regular sets {tilde.system.regular_sets.format()} ≠ {{(A, [∅]) : A ∈ B_reg}}")
    round_trip = CheckResult("tilde.round_trip")
    failures = TildeMaps(tilde, ring).round_trip_failures()
    round_trip.checked = 2 * tilde.system.algebra.size
    round_trip.counterexamples = failures
    return [regular, round_trip]


def ideal_checks(system: DynamicalSystem, ring: CoefficientRing = INTEGERS) -> List[CheckResult]:
    lattice = admissible_pairs(system)
    fmt = system.format
    pairs = CheckResult("ideals.pairs")
    quotients = CheckResult("ideals.quotients")
    relations = CheckResult("ideals.generators")
    kernel = CheckResult("ideals.kernel")
    algebra = SystemAlgebra(system, ring)
    for pair in lattice.pairs:
        H, S = pair.H.top, pair.S.top
        ok = (is_hereditary(system, pair.H) and is_saturated(system, pair.H)
              and hereditary_saturated_closure(system, [H]).top == H
              and S & (H | system.relative_ideal.top) == H | system.relative_ideal.top)
        _note(pairs, None if ok else pair.format())
        witnesses = kernel_failures(algebra, pair)
        for witness in witnesses:
            _note(kernel, witness)
        if not witnesses:
            _note(kernel)
        q = pair.quotient
        try:
            validate_system(q.algebra, q.alphabet, q.theta, q.ideals, q.relative_ideal)
            _note(quotients)
        except GbdsError as exc:
            _note(quotients, f"{pair.format()}: {exc}")
        if H:
            continue
        nonempty = [A for A in pair.S.members if A]
        for A, gen in zip(nonempty, ideal_generators(algebra, pair)):
            if A & ~system.relative_ideal.top == 0:
                _note(relations, None if gen == 0 else f"generator for {fmt(A)} ∈ J is {gen.render()}")

    lattice_check = CheckResult("ideals.lattice")
    _note(lattice_check, None if lattice.is_lattice else "some pairs have no meet or join")
    return [pairs, quotients, relations, kernel, lattice_check]


def _without_relative(system: DynamicalSystem) -> DynamicalSystem:
    return system.with_relative_ideal(None) if system.is_relative else system


def _with_minimal_ideals(system: DynamicalSystem) -> DynamicalSystem:
    minimal = {a: system.minimal_ideal(a) for a in system.alphabet}
    if all(minimal[a].top == system.ideals[a].top for a in system.alphabet):
        return system
    logger.info("embedding checks run with I_a = F_a")
    return system.with_ideals(minimal)


def desingularization_checks(system: DynamicalSystem, settings: VerificationSettings,
                             rng: Optional[random.Random] = None) -> List[CheckResult]:
    """Runs on the non-relative system when J ≠ B_reg; the embedding families use the minimal ideals."""
    base = _without_relative(system)
    desing = desingularize(base)
    n = desing.n
    certificates = CheckResult("desingularization.certificates")
    for cert in desing.certificates(n + settings.extra_levels):
        _note(certificates, None if cert.letter else f"{desing.format_class(cert.level, cert.rep)} has empty Δ")
    stabilization = CheckResult("desingularization.stabilization")
    index = desing.stabilization_index
    _note(stabilization, None if index <= n + 1 else f"X chain stabilizes at {index} > {n + 1}")
    results = [certificates, stabilization]

    base = _with_minimal_ideals(base)
    try:
        report = check_embedding_conditions(base, settings.bound, member_limit=settings.member_limit,
                                            sandwich_bound=settings.sandwich_bound,
                                            max_tuples=settings.max_tuples, rng=rng)
    except BoundTooSmall as exc:
        results.append(CheckResult("desingularization.embedding", 1, [str(exc)]))
        return results
    for family in report.FAMILIES:
        results.append(CheckResult(f"desingularization.{family}", report.checked.get(family, 0),
                                   list(report.counterexamples.get(family, []))))
    if any(base.theta[a](base.algebra.top) for a in base.alphabet):
        control = check_embedding_conditions(base, settings.bound, identity_letter_map(base),
                                             member_limit=settings.member_limit,
                                             sandwich_bound=settings.sandwich_bound,
                                             max_tuples=settings.max_tuples, rng=rng)
        negative = CheckResult("desingularization.negative_control")
        _note(negative, None if not control.passed else "identity letter map passed the embedding checks")
        results.append(negative)
    return results


def expansion_checks(system: DynamicalSystem, settings: VerificationSettings,
                     rng: Optional[random.Random] = None) -> List[CheckResult]:
    report = check_ideal_expansion(system, settings.bound, corner_bound=settings.sandwich_bound,
                                   member_limit=settings.member_limit, max_tuples=settings.max_tuples, rng=rng)
    return [
        CheckResult(f"expansion.{family}", report.checked.get(family, 0),
                    list(report.counterexamples.get(family, [])))
        for family in report.FAMILIES
    ]


# --- stone dual ----------------------------------------------------------

def stone_checks(system: DynamicalSystem) -> List[CheckResult]:
    gba = system.algebra
    found = filters(gba)
    filter_check = CheckResult("stone.filters")
    expected = len([m for m in gba.members if m])
    _note(filter_check, None if len(found) == expected else f"{len(found)} filters for {expected} members")
    for f in found:
        members = [m for m in gba.members if m in f]
        _note(filter_check, None if is_filter(gba, members) else f"{f.name(gba)} fails the filter axioms")

    space = stone_graph(system)
    validity = CheckResult("stone.labelled_space")
    try:
        validate_labelled_space(space)
        _note(validity)
    except ValidationFailure as exc:
        _note(validity, str(exc))

    duality = CheckResult("stone.duality")
    duality.checked = len(system.alphabet) * gba.size + gba.size ** 2
    duality.counterexamples = duality_failures(system, space)

    round_trip = CheckResult("stone.round_trip")
    back = labelled_to_gbds(space)
    _note(round_trip, None if is_isomorphism(system, back, round_trip_map(system, space), relative=False)
          else "x ↦ V_x is not an isomorphism onto the rebuilt system")
    _note(round_trip, None if find_isomorphism(system, back, relative=False) is not None
          else "no isomorphism found by search")
    return [filter_check, validity, duality, round_trip]


# --- drivers -------------------------------------------------------------

def system_checks(system: DynamicalSystem, ring: CoefficientRing, settings: VerificationSettings,
                  seed: int) -> List[CheckResult]:
    """Every suite against one system."""
    rng = random.Random(seed)
    results: List[CheckResult] = []
    results += gba_checks(system, settings)
    results += gbds_checks(system, settings)
    results += semigroup_checks(system, settings.bound, settings.member_limit, settings.max_tuples, rng)
    results += algebra_checks(system, ring, settings, rng)
    results += tilde_checks(system, ring)
    results += ideal_checks(system, ring)
    results += desingularization_checks(system, settings, rng=rng)
    results += expansion_checks(system, settings, rng)
    results += stone_checks(system)
    return results


def random_system_checks(settings: VerificationSettings, seed: int, count: Optional[int] = None,
                         ring: CoefficientRing = INTEGERS) -> List[CheckResult]:
    """Every suite over seeded random systems under the random sampling caps, merged by check name."""
    count = settings.random_systems if count is None else count
    capped = replace(settings, member_limit=settings.random_member_limit, max_tuples=settings.random_max_tuples)
    merged: Dict[str, CheckResult] = {}
    for system_seed in random_system_seeds(count, seed):
        system = random_system(system_seed, settings.max_ground, settings.max_letters)
        results = system_checks(system, ring, capped, system_seed)
        for result in results:
            name = f"random.{result.name}"
            bucket = merged.setdefault(name, CheckResult(name))
            bucket.checked += result.checked
            bucket.counterexamples.extend(f"seed {system_seed}: {w}" for w in result.counterexamples)
    logger.info("random suites: %d systems from seed %d", count, seed)
    return list(merged.values())


__all__ = [
    "VerificationSettings",
    "nonzero_scalars",
    "gba_checks",
    "gbds_checks",
    "semigroup_checks",
    "relation_checks",
    "nonzero_checks",
    "annihilator_checks",
    "grading_checks",
    "confluence_checks",
    "algebra_checks",
    "tilde_checks",
    "ideal_checks",
    "desingularization_checks",
    "expansion_checks",
    "stone_checks",
    "system_checks",
    "random_system_checks",
]
