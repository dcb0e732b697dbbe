import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.boolean_algebra import (
    FiniteGBA,
    GbaMorphism,
    disjointify,
    format_member,
    ideal_generated,
    make_morphism,
    quotient,
    validate_gba,
    validate_morphism,
    whole_ideal,
    zero_ideal,
)
from core.errors import BadMorphism, ClosureViolation, MissingEmptySet, NotAMember, UnknownVertex

V1, V2, V3 = 1, 2, 4


@pytest.fixture
def gba():
    return FiniteGBA.powerset(('v1', 'v2'))


def test_powerset_has_singleton_atoms(gba):
    assert gba.atoms == (V1, V2)
    assert gba.members == (0, V1, V2, V1 | V2)
    assert validate_gba(('v1', 'v2'), [[], ['v1'], ['v2'], ['v1', 'v2']]).atoms == (V1, V2)


def test_union_missing_is_reported():
    with pytest.raises(ClosureViolation) as exc:
        validate_gba(('v1', 'v2'), [[], ['v1'], ['v2']])
    assert exc.value.op == '∪'
    assert {exc.value.left, exc.value.right} == {V1, V2}


def test_coarse_field_of_sets():
    gba = validate_gba(('v1', 'v2', 'v3'), [[], ['v1'], ['v2', 'v3'], ['v1', 'v2', 'v3']])
    assert gba.atoms == (V1, V2 | V3)
    assert V2 not in gba
    with pytest.raises(NotAMember):
        gba.require(V2)


def test_empty_set_is_required():
    with pytest.raises(MissingEmptySet):
        validate_gba(('v1',), [['v1']])


def test_degenerate_algebra_has_no_atoms():
    assert validate_gba((), [[]]).atoms == ()


def test_unknown_vertex(gba):
    with pytest.raises(UnknownVertex):
        gba.member(['v9'])


def test_ideal_generation(gba):
    assert ideal_generated(gba, []).members == (0,)
    assert ideal_generated(gba, [V2]).members == (0, V2)
    assert ideal_generated(gba, [V1, V2]).members == gba.members


def test_quotients(gba):
    assert len(quotient(gba, zero_ideal(gba)).classes) == 4
    by_v1 = quotient(gba, ideal_generated(gba, [V1]))
    assert by_v1.classes == (0, V2)
    assert by_v1.project(V1 | V2) == V2
    assert by_v1.format(V1 | V2) == '[v2]'
    assert len(quotient(gba, whole_ideal(gba)).classes) == 1


def test_disjointify(gba):
    assert disjointify(gba, [(1, V1 | V2)]) == [(1, V1), (1, V2)]
    assert disjointify(gba, [(1, V1), (1, V2)]) == [(1, V1), (1, V2)]
    assert disjointify(gba, [(1, V1 | V2), (-1, V1)]) == [(1, V2)]


def test_morphism_is_join_extension(gba):
    theta = make_morphism(gba, gba, {V1: V2}, 'a')
    assert theta(V1 | V2) == V2
    assert theta(V2) == 0
    assert not theta.is_zero


def test_overlapping_images_break_the_meet_law(gba):
    bad = GbaMorphism(gba, gba, {V1: V1, V2: V1})
    with pytest.raises(BadMorphism):
        validate_morphism(bad, 'a')
    with pytest.raises(BadMorphism):
        validate_morphism(bad, 'a', exhaustive_limit=1)


def test_format_member():
    assert format_member(('v1', 'v2', 'v3'), V1 | V3) == '[v1 v3]'
    assert format_member(('v1',), 0) == '[]'
