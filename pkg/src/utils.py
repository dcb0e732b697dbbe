import os
import random
import yaml
import logging

DEFAULTS = {
    'cli': {'default_bound': 6, 'default_format': 'text', 'default_ring': 'int'},
    'logging': {'log_file': 'logs/gbds_lab.log', 'level': 'INFO'},
    'verification': {
        'random_systems': 100,
        'max_ground': 4,
        'max_letters': 3,
        'exhaustive_member_limit': 4096,
        'local_unit_generator_limit': 12,
        'sandwich_bound': 4,
        'grading_pairs': 10000,
        'rewrite_schedules': 50,
        'rewrite_elements': 1000,
        'member_limit': 64,
        'max_tuples': 2000000,
        'random_member_limit': 8,
        'random_max_tuples': 20000,
    },
    'desingularization': {'extra_levels': 3},
}

LOGGER_NAMES = ('gbds_lab', 'core', 'modules')


def load_config(path='config/config.yaml'):
    """Load YAML configuration, filling missing sections from DEFAULTS."""
    with open(path, 'r', encoding='utf-8') as f:
        loaded = yaml.safe_load(f) or {}
    config = {section: dict(values) for section, values in DEFAULTS.items()}
    for section, values in loaded.items():
        if isinstance(values, dict):
            config.setdefault(section, {}).update(values)
        else:
            config[section] = values
    return config


def configure_logger(log_file='logs/gbds_lab.log', level='INFO'):
    """Send library and CLI logs to ``log_file``; return the CLI logger."""
    os.makedirs(os.path.dirname(log_file) or '.', exist_ok=True)
    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    for name in LOGGER_NAMES:
        logger = logging.getLogger(name)
        logger.setLevel(level)
        if not any(isinstance(h, logging.FileHandler) and h.baseFilename == os.path.abspath(log_file)
                   for h in logger.handlers):
            handler = logging.FileHandler(log_file)
            handler.setFormatter(formatter)
            logger.addHandler(handler)
    return logging.getLogger('gbds_lab')


def resolve_seed(seed=None):
    """Explicit seed, else GBDS_LAB_SEED, else a fresh random one."""
    if seed is not None:
        return int(seed)
    env = os.getenv('GBDS_LAB_SEED')
    if env:
        return int(env)
    return random.SystemRandom().randrange(2**31)
