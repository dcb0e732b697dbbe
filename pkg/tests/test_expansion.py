import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.constructions import check_ideal_expansion, expand_ideals_to_full, unreached_idempotents
from core.errors import InvalidElement
from core.inverse_semigroup import SemigroupElement, element, enumerate_elements
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))


def load(name):
    return parse_system(os.path.join(ROOT, 'fixtures', name))


def test_expanded_ideals_are_full():
    system = load('fix1.json')
    expanded = expand_ideals_to_full(system)
    assert expanded.ideals['a'].top == 3
    assert expanded.relative_ideal.top == system.relative_ideal.top
    assert element(expanded, ('a',), 1, ('a',)).A == 1
    with pytest.raises(InvalidElement):
        element(system, ('a',), 1, ('a',))


@pytest.mark.parametrize('name', ['fix1.json', 'fix1_j_empty.json', 'fix2.json'])
def test_corner_checks_pass(name):
    report = check_ideal_expansion(load(name), 4)
    assert report.passed, report.counterexamples
    assert set(report.checked) >= {'inclusion', 'generation'}
    assert report.checked['generation'] > 0


def test_expansion_idempotents_come_from_the_corner():
    system = load('fix1.json')
    expanded = expand_ideals_to_full(system)
    large = enumerate_elements(expanded, 4)
    generators = [e for e in enumerate_elements(system, 4) if e.is_idempotent]
    assert unreached_idempotents(expanded, large, generators) == []


def test_missing_generators_leave_idempotents_unreached():
    system = load('fix1.json')
    expanded = expand_ideals_to_full(system)
    large = enumerate_elements(expanded, 4)
    generators = [e for e in enumerate_elements(system, 4) if e.is_idempotent and not e.A & 1]
    missing = unreached_idempotents(expanded, large, generators)
    assert SemigroupElement((), 1, ()) in missing
    assert all(f.A & 1 for f in missing)
