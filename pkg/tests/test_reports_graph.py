import json
import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from core.constructions import admissible_pairs
from core.stone_dual import stone_graph
from modules.graph_export import export_graphml, lattice_to_dot, space_to_dot, space_to_networkx
from modules.reports import Report, export_report_json
from modules.system_document import parse_system

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))


def load(name):
    return parse_system(os.path.join(ROOT, 'fixtures', name))


def test_passing_report():
    report = Report('verify', 'fix1.json')
    report.add('seed', 7)
    report.add('atoms', [{'atom': '[v1]', 'class': 'regular'}])
    report.check('gba.closure', checked=4)
    text = report.finish().render('text')
    assert 'all checks passed' in text
    assert 'gba.closure' in text
    assert report.exit_code == 0


def test_failing_report(tmp_path):
    report = Report('verify')
    report.check('semigroup.associativity', checked=10, counterexamples=['(a, [v2], ω)'])
    report.finish()
    assert report.exit_code == 2
    assert '1 check(s) failed' in report.to_text()
    data = json.loads(report.render('json'))
    assert data['passed'] is False
    assert data['checks'][0]['counterexamples'] == ['(a, [v2], ω)']
    path = export_report_json(report, str(tmp_path / 'report.json'))
    with open(path, encoding='utf-8') as f:
        assert json.load(f)['command'] == 'verify'


def test_space_exports(tmp_path):
    space = stone_graph(load('fix1.json'))
    dot = space_to_dot(space)
    assert dot.startswith('digraph stone {')
    assert dot.count('->') == 2
    graph = space_to_networkx(space)
    assert graph.number_of_nodes() == 3
    assert {(s, t, d['label']) for s, t, d in graph.edges(data=True)} == set(space.edges)
    path = export_graphml(graph, str(tmp_path / 'stone.graphml'))
    assert os.path.exists(path)


def test_lattice_dot():
    dot = lattice_to_dot(admissible_pairs(load('fix1_j_empty.json')))
    assert 'rankdir=BT' in dot
    assert dot.count('->') == 4
