import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.boolean_algebra import FiniteGBA, GbaIdeal, make_morphism, zero_ideal
from core.dynamical_system import format_word, parse_word, validate_system
from core.errors import IdealTooSmall, JNotRegular, ParseError, UnknownLetter
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
V1, V2, V3 = 1, 2, 4


def load(name):
    return parse_system(os.path.join(ROOT, 'fixtures', name))


@pytest.fixture
def fix1():
    return load('fix1.json')


@pytest.fixture
def fix2():
    return load('fix2.json')


def test_fix1_classification(fix1):
    assert fix1.regular_sets.members == (0, V1)
    assert fix1.sink_sets.members == (0, V2)
    assert fix1.classify(V1).kind == 'regular'
    assert fix1.classify(V1 | V2).kind == 'singular-non-sink'
    assert fix1.classify(V2) == ('sink', True)
    assert not fix1.is_relative


def test_fix2_has_no_sinks(fix2):
    assert fix2.classify(V1 | V2 | V3).kind == 'regular'
    assert fix2.sink_sets.top == 0


def test_delta(fix1, fix2):
    assert fix1.delta(0) == frozenset()
    assert fix1.delta(V1) == {'a'}
    assert fix2.delta(V1 | V3) == {'a'}


def test_theta_word(fix1, fix2):
    assert fix1.theta_word((), V1) == V1
    assert fix1.theta_word(('a', 'a'), V1) == 0
    assert fix2.theta_word(('a', 'b'), V1) == V3


def test_word_ideals(fix1):
    assert fix1.ideal_word(()).members == fix1.algebra.members
    assert fix1.ideal_word(('a',)).members == (0, V2)
    assert fix1.ideal_word(('a', 'a')).members == (0,)


def test_ideal_too_small(fix1):
    gba = fix1.algebra
    with pytest.raises(IdealTooSmall) as exc:
        validate_system(gba, ('a',), fix1.theta, {'a': zero_ideal(gba)})
    assert exc.value.witness == V2


def test_relative_ideal_must_be_regular(fix1):
    with pytest.raises(JNotRegular) as exc:
        fix1.with_relative_ideal(GbaIdeal(fix1.algebra, V2))
    assert exc.value.witness == V2


def test_missing_parts_default():
    gba = FiniteGBA.powerset(('v1',))
    system = validate_system(gba, ('a',), {})
    assert system.theta['a'].is_zero
    assert system.ideals['a'].top == 0
    assert system.regular_sets.top == 0


def test_unknown_letter():
    gba = FiniteGBA.powerset(('v1',))
    with pytest.raises(UnknownLetter):
        validate_system(gba, ('a',), {'b': make_morphism(gba, gba, {})})


def test_relative_variant(fix1):
    relative = load('fix1_j_empty.json')
    assert relative.is_relative
    assert relative.relative_ideal.top == 0
    assert relative.regular_sets.top == fix1.regular_sets.top


def test_words():
    assert parse_word('ab', ('a', 'b')) == ('a', 'b')
    assert parse_word('ω', ('a',)) == ()
    assert parse_word('b_1.a', ('a', 'b_1')) == ('b_1', 'a')
    assert format_word(()) == 'ω'
    assert format_word(('b_1', 'a')) == 'b_1.a'
    with pytest.raises(ParseError):
        parse_word('c', ('a', 'b'))
