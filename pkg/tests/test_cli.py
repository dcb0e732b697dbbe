import json
import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

import gbds_lab
from modules.reports import CheckResult

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
FIX1 = os.path.join(ROOT, 'fixtures', 'fix1.json')
FIX1_J_EMPTY = os.path.join(ROOT, 'fixtures', 'fix1_j_empty.json')
FIX2 = os.path.join(ROOT, 'fixtures', 'fix2.json')


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'config.yaml'
    path.write_text(
        'cli:\n'
        '  default_bound: 4\n'
        'logging:\n'
        f'  log_file: {tmp_path / "lab.log"}\n'
        'verification:\n'
        '  grading_pairs: 100\n'
        '  rewrite_elements: 20\n'
        '  rewrite_schedules: 3\n'
        '  random_systems: 3\n',
        encoding='utf-8',
    )
    return str(path)


def run(capsys, *argv):
    status = gbds_lab.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_verify_fixture(capsys, config_file):
    status, out, _ = run(capsys, 'verify', '--system', FIX1, '--seed', '3', '--config', config_file)
    assert status == 0
    assert 'all checks passed' in out
    assert 'seed: 3' in out


def test_verify_json(capsys, config_file):
    status, out, _ = run(capsys, 'verify', '--system', FIX1_J_EMPTY, '--seed', '3',
                         '--format', 'json', '--config', config_file)
    assert status == 0
    data = json.loads(out)
    assert data['passed'] is True
    assert data['sections']['seed'] == 3


def test_algebra_expression(capsys, config_file):
    status, out, _ = run(capsys, 'algebra', '--system', FIX1, '--expr', 'S{a,[v2]}*s{a,[v2]}',
                         '--config', config_file)
    assert status == 0
    assert out.strip() == 'p[v2]'


def test_info_and_semigroup(capsys, config_file):
    status, out, _ = run(capsys, 'info', '--system', FIX1, '--config', config_file)
    assert status == 0 and 'singular' not in out and 'sink' in out
    status, out, _ = run(capsys, 'semigroup', '--system', FIX1, '--grade', 'a', '--config', config_file)
    assert status == 0
    assert '(a, [v2], ω)' in out


def test_stone_dot(capsys, config_file):
    status, out, _ = run(capsys, 'stone', '--system', FIX1, '--format', 'dot', '--config', config_file)
    assert status == 0
    lines = out.splitlines()
    assert sum(1 for line in lines if line.startswith('  "') and '->' not in line) == 3
    assert sum(1 for line in lines if '->' in line) == 2


def test_ideals_and_tilde(capsys, config_file):
    status, out, _ = run(capsys, 'ideals', '--system', FIX1_J_EMPTY, '--format', 'dot', '--config', config_file)
    assert status == 0 and out.startswith('digraph pairs')
    status, _, _ = run(capsys, 'tilde', '--system', FIX1_J_EMPTY, '--config', config_file)
    assert status == 0


def test_desingularize(capsys, config_file):
    status, out, _ = run(capsys, 'desingularize', '--system', FIX1, '--config', config_file)
    assert status == 0
    assert 'b_1' in out and 'stabilization_index: 2' in out


def test_from_labelled(capsys, config_file, tmp_path):
    space = tmp_path / 'space.json'
    space.write_text(json.dumps({'vertices': ['x', 'y'], 'edges': [['x', 'y', 'a']]}), encoding='utf-8')
    target = tmp_path / 'system.json'
    status, out, _ = run(capsys, 'from-labelled', '--system', str(space), '--output', str(target),
                         '--format', 'json', '--config', config_file)
    assert status == 0
    assert json.loads(out)['alphabet'] == ['a']
    status, _, _ = run(capsys, 'validate', '--system', str(target), '--config', config_file)
    assert status == 0


def test_missing_file(capsys, config_file, tmp_path):
    status, _, err = run(capsys, 'validate', '--system', str(tmp_path / 'nope.json'), '--config', config_file)
    assert status == 1
    assert err.startswith('error:')


def test_verify_needs_a_target(capsys, config_file):
    status, _, err = run(capsys, 'verify', '--config', config_file)
    assert status == 1
    assert 'verify needs' in err


def test_counterexamples_exit_with_two(capsys, config_file, monkeypatch):
    monkeypatch.setattr(gbds_lab, 'system_checks',
                        lambda *args, **kwargs: [CheckResult('semigroup.associativity', 1, ['boom'])])
    status, out, _ = run(capsys, 'verify', '--system', FIX1, '--seed', '1', '--config', config_file)
    assert status == 2
    assert 'boom' in out


def test_seed_from_environment(capsys, config_file, monkeypatch):
    monkeypatch.setenv('GBDS_LAB_SEED', '77')
    status, out, _ = run(capsys, 'verify', '--random', '2', '--config', config_file)
    assert status == 0
    assert 'seed: 77' in out


@pytest.mark.parametrize('path', [FIX1, FIX2, FIX1_J_EMPTY])
def test_verify_at_default_bound(capsys, config_file, path):
    status, out, _ = run(capsys, 'verify', '--system', path, '--bound', '6', '--seed', '1',
                         '--config', config_file)
    assert status == 0, out


@pytest.mark.parametrize('argv', [
    ['bogus'],
    ['verify', '--system', FIX1, '--bound', 'abc'],
    ['stone', '--system', FIX1, '--format', 'png'],
])
def test_usage_errors_are_invalid_input(capsys, config_file, argv):
    status, _, err = run(capsys, *argv, '--config', config_file)
    assert status == 1
    assert 'error: gbds-lab:' in err


def test_stone_space_round_trip(capsys, config_file, tmp_path):
    space = tmp_path / 'space.json'
    status, _, _ = run(capsys, 'stone', '--system', FIX1, '--output', str(space), '--config', config_file)
    assert status == 0
    assert len(json.loads(space.read_text(encoding='utf-8'))['vertices']) == 3
    rebuilt = tmp_path / 'rebuilt.json'
    status, _, _ = run(capsys, 'from-labelled', '--system', str(space), '--output', str(rebuilt),
                       '--config', config_file)
    assert status == 0
    status, out, _ = run(capsys, 'info', '--system', str(rebuilt), '--config', config_file)
    assert status == 0 and 'sink' in out


def test_stone_graphml(capsys, config_file, tmp_path):
    target = tmp_path / 'stone.graphml'
    status, out, _ = run(capsys, 'stone', '--system', FIX1, '--format', 'graphml', '--output', str(target),
                         '--config', config_file)
    assert status == 0
    assert '<graphml' in target.read_text(encoding='utf-8')
    assert str(target) in out
    status, _, err = run(capsys, 'stone', '--system', FIX1, '--format', 'graphml', '--config', config_file)
    assert status == 1 and 'needs --output' in err
    status, _, err = run(capsys, 'info', '--system', FIX1, '--format', 'graphml', '--config', config_file)
    assert status == 1 and 'only applies to stone' in err


def test_verify_report_file(capsys, config_file, tmp_path):
    target = tmp_path / 'report.json'
    status, _, _ = run(capsys, 'verify', '--system', FIX1, '--seed', '2', '--output', str(target),
                       '--config', config_file)
    assert status == 0
    data = json.loads(target.read_text(encoding='utf-8'))
    assert data['command'] == 'verify' and data['passed'] is True
