import itertools
import os
import random
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.errors import InvalidElement, NotIdempotent, NotInDomain, ZeroUngraded
from core.inverse_semigroup import (
    ZERO,
    FreeGroupWord,
    SemigroupElement,
    element,
    enumerate_elements,
    fiber,
    grade,
    idempotent_leq,
    idempotents,
    multiply,
    natural_leq,
    phi_conjugate,
    sandwich_triples,
    semi_saturation_failures,
    star,
)
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
V1, V2, V3 = 1, 2, 4
W, A = (), ('a',)


@pytest.fixture(scope='module')
def fix1():
    return parse_system(os.path.join(ROOT, 'fixtures', 'fix1.json'))


@pytest.fixture(scope='module')
def fix2():
    return parse_system(os.path.join(ROOT, 'fixtures', 'fix2.json'))


def el(alpha, members, beta):
    return SemigroupElement(tuple(alpha), members, tuple(beta))


def test_fix1_elements(fix1):
    elements = enumerate_elements(fix1, 6)
    assert len(elements) == 6
    assert len(enumerate_elements(fix1, 6, include_zero=True)) == 7
    assert el(A, V2, A) in elements
    assert len(idempotents(elements)) == 4


def test_validating_constructor(fix1):
    assert element(fix1, A, 0, W) == ZERO
    assert element(fix1, A, V2, W) == el(A, V2, W)
    with pytest.raises(InvalidElement):
        element(fix1, A, V1, W)


def test_multiplication_cases(fix1):
    assert multiply(fix1, el(A, V2, W), el(W, V1, A)) == ZERO
    assert multiply(fix1, el(W, V1, W), el(A, V2, A)) == el(A, V2, A)
    assert multiply(fix1, el(A, V2, W), el(W, V2, A)) == el(A, V2, A)
    assert multiply(fix1, el(W, V2, A), el(A, V2, W)) == el(W, V2, W)
    assert multiply(fix1, ZERO, el(W, V1, W)) == ZERO


def test_involution(fix1):
    assert star(el(A, V2, W)) == el(W, V2, A)
    assert star(ZERO) == ZERO
    for s in enumerate_elements(fix1, 6, include_zero=True):
        assert star(star(s)) == s


def test_idempotent_order(fix1):
    assert idempotent_leq(fix1, el(A, V2, A), el(W, V1, W))
    assert idempotent_leq(fix1, el(W, V1, W), el(W, V1 | V2, W))
    assert not idempotent_leq(fix1, el(W, V1, W), el(A, V2, A))
    assert idempotent_leq(fix1, ZERO, el(W, V1, W))
    with pytest.raises(NotIdempotent):
        idempotent_leq(fix1, el(A, V2, W), el(W, V1, W))


def test_natural_order_matches_on_idempotents(fix1):
    idem = idempotents(enumerate_elements(fix1, 6, include_zero=True))
    for e, f in itertools.product(idem, repeat=2):
        assert idempotent_leq(fix1, e, f) == natural_leq(fix1, e, f)


def test_grades():
    assert grade(el(A, V2, A)).is_identity
    assert grade(el(A, V2, W)) == FreeGroupWord.from_words(A)
    assert str(grade(el(W, V2, A))) == 'a^-1'
    with pytest.raises(ZeroUngraded):
        grade(ZERO)


def test_free_group_words():
    g = FreeGroupWord.parse('ab^-1', ('a', 'b'))
    assert g.split() == (('a',), ('b',))
    assert (g * g.inverse()).is_identity
    assert FreeGroupWord.parse('a^-1b', ('a', 'b')).split() is None


def test_fibers(fix1, fix2):
    identity = fiber(fix1, FreeGroupWord(), 4)
    assert set(identity) == {el(W, V1, W), el(W, V2, W), el(W, V1 | V2, W), el(A, V2, A)}
    assert fiber(fix1, FreeGroupWord.parse('aa', ('a',)), 6) == []
    assert fiber(fix2, FreeGroupWord.parse('a^-1b', ('a', 'b')), 6) == []


def test_conjugation(fix1):
    g = FreeGroupWord.parse('a', ('a',))
    assert phi_conjugate(fix1, g, el(A, V2, A)) == el(W, V2, W)
    assert phi_conjugate(fix1, FreeGroupWord(), el(W, V1, W)) == el(W, V1, W)
    with pytest.raises(NotInDomain):
        phi_conjugate(fix1, g, el(W, V1, W))


def test_associativity_fix2(fix2):
    elements = enumerate_elements(fix2, 4, include_zero=True)
    for s, t, u in itertools.product(elements, repeat=3):
        assert multiply(fix2, multiply(fix2, s, t), u) == multiply(fix2, s, multiply(fix2, t, u))


def test_strongly_e_star_unitary(fix2):
    for s in enumerate_elements(fix2, 6):
        if grade(s).is_identity:
            assert s.is_idempotent


def test_semi_saturation(fix1, fix2):
    assert semi_saturation_failures(fix1, enumerate_elements(fix1, 6)) == []
    assert semi_saturation_failures(fix2, enumerate_elements(fix2, 4)) == []


def test_sandwich_triples_sample_above_the_cap():
    outer = [SemigroupElement(W, V1, W), SemigroupElement(W, V2, W)]
    middle = [SemigroupElement(A, V2, W)]
    assert len(list(sandwich_triples(outer, middle))) == 4
    assert len(list(sandwich_triples(outer, middle, cap=4))) == 4
    sampled = list(sandwich_triples(outer, middle, cap=3, rng=random.Random(9)))
    assert len(sampled) == 3
    assert all(x in outer and s in middle and y in outer for x, s, y in sampled)
    assert sampled == list(sandwich_triples(outer, middle, cap=3, rng=random.Random(9)))
    assert list(sandwich_triples([], middle, cap=3)) == []
