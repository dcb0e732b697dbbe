import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from core.errors import NotInIdeal, ParseError
from core.skew_algebra import SystemAlgebra
from modules.expression import parse_expression
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))


@pytest.fixture(scope='module')
def algebra():
    return SystemAlgebra(parse_system(os.path.join(ROOT, 'fixtures', 'fix1_j_empty.json')))


def test_starred_product(algebra):
    assert parse_expression(algebra, 'S{a,[v2]}*s{a,[v2]}').render() == 'p[v2]'
    assert parse_expression(algebra, 's{a,[v2]} * S{a,[v2]}').render() == 's{a,[v2]}*S{a,[v2]}'


def test_precedence(algebra):
    assert parse_expression(algebra, 'p[v1] + p[v2]*p[v1]').render() == 'p[v1]'
    assert parse_expression(algebra, '(p[v1] + p[v2])*p[v1]').render() == 'p[v1]'
    assert parse_expression(algebra, 'p[v1] + p[v2]') == parse_expression(algebra, 'p{[v1 v2]}')
    assert parse_expression(algebra, 'p[v1] - p[v1]') == 0


def test_scalars(algebra):
    assert parse_expression(algebra, '2*p[v1]').render() == '2*p[v1]'
    assert parse_expression(algebra, '-p[v1]*3').render() == '-3*p[v1]'
    assert parse_expression(algebra, '0') == 0
    assert parse_expression(algebra, 'q[v1]').render() == 'p[v1] - s{a,[v2]}*S{a,[v2]}'


@pytest.mark.parametrize('text', ['2', 'p[v1] + 1', 'p[v9]', 'p[v1])', 's{a[v2]}', ''])
def test_rejected(algebra, text):
    with pytest.raises(ParseError):
        parse_expression(algebra, text)


def test_generator_outside_its_ideal(algebra):
    with pytest.raises(NotInIdeal):
        parse_expression(algebra, 's{a,[v1]}')
