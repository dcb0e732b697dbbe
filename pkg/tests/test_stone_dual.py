import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.boolean_algebra import FiniteGBA
from core.errors import NotAMember, ValidationFailure
from core.stone_dual import (
    LabelledSpace,
    VertexFamily,
    duality_failures,
    filters,
    find_isomorphism,
    is_filter,
    is_isomorphism,
    labelled_to_gbds,
    round_trip_map,
    stone_embedding,
    stone_graph,
    validate_labelled_space,
)
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))


def load(name):
    return parse_system(os.path.join(ROOT, 'fixtures', name))


@pytest.fixture(scope='module')
def fix1():
    return load('fix1.json')


def test_filters(fix1):
    gba = fix1.algebra
    assert [f.name(gba) for f in filters(gba)] == ['F[v1]', 'F[v2]', 'F[v1 v2]']
    assert len(filters(load('fix2.json').algebra)) == 7
    assert is_filter(gba, [1, 3])
    assert not is_filter(gba, [1, 2, 3])
    assert not is_filter(gba, [0, 1, 3])


def test_stone_graph(fix1):
    space = stone_graph(fix1)
    assert space.vertices == ('F[v1]', 'F[v2]', 'F[v1 v2]')
    assert set(space.edges) == {('F[v1]', 'F[v2]', 'a'), ('F[v1 v2]', 'F[v2]', 'a')}
    assert len(stone_graph(load('fix2.json')).vertices) == 7


def test_range(fix1):
    space = stone_graph(fix1)
    v = stone_embedding(fix1)
    assert space.range(v[1], 'a') == v[2]
    assert space.range(v[3], 'a') == v[2]
    assert space.range(v[2], 'a') == 0
    with pytest.raises(NotAMember):
        space.range(space.mask(['F[v1]', 'F[v2]']), 'a')


def test_weakly_left_resolving_is_enforced():
    family = VertexFamily.of(FiniteGBA.powerset(('x', 'y', 't')).members)
    space = LabelledSpace(('x', 'y', 't'), ('a',), (('x', 't', 'a'), ('y', 't', 'a')), family)
    with pytest.raises(ValidationFailure) as excinfo:
        validate_labelled_space(space)
    assert excinfo.value.kind == 'WLR'


def test_family_must_be_normal():
    family = VertexFamily.of([0, 1, 2])
    space = LabelledSpace(('x', 'y'), (), (), family)
    with pytest.raises(ValidationFailure) as excinfo:
        validate_labelled_space(space)
    assert excinfo.value.kind == 'normal'


def test_single_vertex_space():
    family = VertexFamily.of([0, 1])
    system = labelled_to_gbds(LabelledSpace(('x',), (), (), family))
    assert system.algebra.ground == ('x',)
    assert system.alphabet == ()
    assert system.sink_sets.top == 1


@pytest.mark.parametrize('name', ['fix1.json', 'fix2.json'])
def test_round_trip(name):
    system = load(name)
    space = stone_graph(system)
    back = labelled_to_gbds(space)
    assert is_isomorphism(system, back, round_trip_map(system, space), relative=False)
    assert find_isomorphism(system, back, relative=False) is not None
    assert duality_failures(system, space) == []


def test_isomorphism_respects_the_relative_ideal():
    plain, relative = load('fix1.json'), load('fix1_j_empty.json')
    identity = {m: m for m in plain.algebra.members}
    assert is_isomorphism(plain, relative, identity, relative=False)
    assert not is_isomorphism(plain, relative, identity)
    assert find_isomorphism(plain, relative) is None
