import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.constructions import (
    check_embedding_conditions,
    desingularize,
    h_embed,
    identity_letter_map,
)
from core.errors import BoundTooSmall, RelativeSystemUnsupported
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
V1, V2 = 1, 2


def load(name):
    return parse_system(os.path.join(ROOT, 'fixtures', name))


@pytest.fixture(scope='module')
def fix1():
    return load('fix1.json')


def test_x_chain(fix1):
    desing = desingularize(fix1)
    assert tuple(x.top for x in desing.x_chain) == (0, 0, V1)
    assert desing.stabilization_index == 2


def test_every_class_has_a_letter(fix1):
    desing = desingularize(fix1)
    certificates = {(c.level, c.rep): c.letter for c in desing.certificates(4)}
    assert certificates[(0, V2)] == 'b_1'
    assert certificates[(1, V1)] == 'a'
    assert certificates[(1, V2)] == 'b_2'
    assert desing.uncertified(4) == []
    assert desing.format_class(1, V1) == '[v1]_1'


def test_fix2_is_certified():
    desing = desingularize(load('fix2.json'))
    assert desing.uncertified(desing.n + 3) == []
    assert desing.stabilization_index <= desing.n + 1


def test_h_embed():
    assert h_embed(('b', 'a'), ('a', 'b')) == ('b_1', 'b_2', 'b', 'b_1', 'a')
    assert h_embed((), ('a', 'b')) == ()


def test_truncation(fix1):
    trunc = desingularize(fix1).truncation(2)
    assert trunc.system.alphabet == ('a', 'b_1', 'b_2')
    assert trunc.system.algebra.ground[:4] == ('v1@0', 'v2@0', 'v1@1', 'v2@1')
    assert trunc.component(trunc.shift(V2, 1), 1) == V2
    assert trunc.support(trunc.shift(V1, 0) | trunc.shift(V2, 2)) == [0, 2]


@pytest.mark.parametrize('name, bound', [('fix1.json', 6), ('fix2.json', 4)])
def test_embedding_conditions_hold(name, bound):
    report = check_embedding_conditions(load(name), bound)
    assert report.passed, report.rows()
    assert all(report.checked.get(family, 0) > 0 for family in ('morphism', 'membership', 'full_ideal'))


def test_identity_letter_map_is_rejected(fix1):
    report = check_embedding_conditions(fix1, 4, identity_letter_map(fix1))
    assert not report.passed


def test_bound_must_cover_the_alphabet():
    with pytest.raises(BoundTooSmall):
        check_embedding_conditions(load('fix2.json'), 2)


def test_relative_systems_are_refused():
    with pytest.raises(RelativeSystemUnsupported):
        desingularize(load('fix1_j_empty.json'))
