import logging

import pytest

from core.errors import (
    ConfigError,
    CouplingError,
    DiagnosticsTracker,
    DomainError,
    ScatteringError,
    SolverError,
)
from core.logging_setup import DetailedFormatter, attach_file_logging, setup_logging


def make_record(message: str, **extra) -> logging.LogRecord:
    record = logging.LogRecord('activity', logging.INFO, __file__, 1, message, None, None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


def file_handlers(logger: logging.Logger):
    return [h for h in logger.handlers if isinstance(h, logging.FileHandler)]


class TestErrors:
    def test_hierarchy(self):
        assert issubclass(CouplingError, SolverError)
        assert issubclass(DomainError, ValueError) and issubclass(ConfigError, ScatteringError)

    def test_solver_error_carries_condition(self):
        error = SolverError("singular", condition=1e15)
        assert error.condition == 1e15
        assert SolverError("plain").condition is None


class TestDiagnosticsTracker:
    def test_count_and_summary(self):
        tracker = DiagnosticsTracker()
        tracker.record('clamped_noise', 'noise', 'clamped', count=3)
        tracker.record('clamped_noise', 'noise', 'clamped again', count=2)
        tracker.record('made_up', 'nowhere', 'odd')
        assert tracker.count('clamped_noise') == 5
        assert tracker.count('residual') == 0
        summary = tracker.summary()
        assert summary['clamped_noise']['events'] == 2
        assert summary['clamped_noise']['items'] == 5
        assert summary['clamped_noise']['remedies'] == ['Lower the absolute noise level']
        assert summary['made_up']['remedies'] == ['Re-run with default settings']

    def test_suggest_remedies_returns_copy(self):
        tracker = DiagnosticsTracker()
        tracker.suggest_remedies('residual').append('x')
        assert 'x' not in tracker.suggest_remedies('residual')


class TestLogging:
    def test_formatter_prefixes_stage(self):
        formatter = DetailedFormatter('%(message)s')
        assert formatter.format(make_record('solved', stage='forward')) == '[forward] solved'
        assert formatter.format(make_record('plain')) == 'plain'

    def test_formatter_leaves_record_untouched(self):
        record = make_record('solved', stage='forward')
        DetailedFormatter('%(message)s').format(record)
        assert record.msg == 'solved'

    def test_attach_file_logging_is_idempotent(self, tmp_path):
        activity, errors = attach_file_logging('test_attach', tmp_path, 'demo')
        again, _ = attach_file_logging('test_attach', tmp_path, 'demo')
        try:
            assert again is activity
            assert len(file_handlers(activity)) == 1
            activity.info('hello')
            errors.warning('careful')
            for handler in file_handlers(activity) + file_handlers(errors):
                handler.flush()
            assert 'hello' in (tmp_path / 'demo_activity.log').read_text(encoding='utf-8')
            assert 'careful' in (tmp_path / 'demo_errors.log').read_text(encoding='utf-8')
        finally:
            for logger in (activity, errors):
                for handler in file_handlers(logger):
                    logger.removeHandler(handler)
                    handler.close()

    def test_setup_logging_without_files(self):
        activity, errors = setup_logging()
        assert activity.name == 'activity' and errors.name == 'errors'
        assert activity.level == logging.INFO and errors.level == logging.WARNING
