import logging
import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.utils import configure_logger


def _read(logger, log_file):
    for handler in logger.handlers:
        handler.flush()
    with open(log_file) as f:
        return f.read()


def test_error_logging(tmp_path):
    log_file = tmp_path / 'error.log'
    logger = configure_logger(str(log_file))
    logger.error('failure')
    assert 'failure' in _read(logger, log_file)
    assert logger.name == 'gbds_lab'


def test_library_loggers_share_the_file(tmp_path):
    log_file = tmp_path / 'lab.log'
    configure_logger(str(log_file), level='DEBUG')
    core_logger = logging.getLogger('core.boolean_algebra')
    core_logger.warning('sampling atoms')
    assert 'sampling atoms' in _read(logging.getLogger('core'), log_file)
