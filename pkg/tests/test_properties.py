import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from hypothesis import given, settings, strategies as st

from core.constructions import admissible_pairs, desingularize, tilde_system
from core.dynamical_system import validate_system
from core.inverse_semigroup import enumerate_elements, multiply, star
from core.skew_algebra import SystemAlgebra, relation_residues
from core.stone_dual import duality_failures
from modules.random_systems import random_system

seeds = st.integers(min_value=0, max_value=2**31 - 1)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_random_systems_are_valid(seed):
    system = random_system(seed, max_ground=3, max_letters=2)
    again = validate_system(system.algebra, system.alphabet, system.theta, system.ideals, system.relative_ideal)
    assert again.regular_sets.top == system.regular_sets.top
    assert system.relative_ideal.top & ~system.regular_sets.top == 0


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_star_is_an_involution(seed):
    system = random_system(seed, max_ground=3, max_letters=2)
    elements = enumerate_elements(system, 2, include_zero=True)
    for s in elements:
        assert star(star(s)) == s
        assert multiply(system, multiply(system, s, star(s)), s) == s


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_stone_duality(seed):
    assert duality_failures(random_system(seed, max_ground=3, max_letters=2)) == []


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_tilde_regular_sets(seed):
    assert tilde_system(random_system(seed, max_ground=3, max_letters=2)).regular_sets_match


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_desingularized_levels_have_letters(seed):
    system = random_system(seed, max_ground=3, max_letters=2, relative=False)
    desing = desingularize(system)
    assert desing.uncertified(desing.n + 3) == []


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_relations_hold(seed):
    algebra = SystemAlgebra(random_system(seed, max_ground=3, max_letters=2))
    assert all(residue == 0 for _, residue in relation_residues(algebra, word_len=1, member_limit=8))


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_pairs_form_a_lattice(seed):
    assert admissible_pairs(random_system(seed, max_ground=3, max_letters=2)).is_lattice
