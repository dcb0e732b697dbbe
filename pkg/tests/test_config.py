import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.utils import load_config, resolve_seed

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))


def test_load_config():
    config = load_config(os.path.join(ROOT, 'config', 'config.yaml'))
    assert isinstance(config, dict)
    assert config.get('cli', {}).get('default_bound') == 6
    assert config['verification']['random_systems'] == 100
    assert config['desingularization']['extra_levels'] == 3


def test_missing_sections_fall_back_to_defaults(tmp_path):
    path = tmp_path / 'partial.yaml'
    path.write_text('cli:\n  default_bound: 4\n')
    config = load_config(str(path))
    assert config['cli']['default_bound'] == 4
    assert config['cli']['default_format'] == 'text'
    assert config['verification']['sandwich_bound'] == 4


def test_resolve_seed(monkeypatch):
    assert resolve_seed(7) == 7
    monkeypatch.setenv('GBDS_LAB_SEED', '123')
    assert resolve_seed() == 123
    monkeypatch.delenv('GBDS_LAB_SEED')
    assert isinstance(resolve_seed(), int)
