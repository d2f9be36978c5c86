#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Logging setup with separate files for activities and errors
"""

from pathlib import Path
from typing import Optional, Tuple
import logging

ACTIVITY_FORMAT = '%(asctime)s - [%(threadName)s] - %(levelname)s - %(message)s'
ERROR_FORMAT = '%(asctime)s - [%(threadName)s] - %(levelname)s - %(message)s\n%(pathname)s:%(lineno)d\n'


class DetailedFormatter(logging.Formatter):
    """Formatter that prefixes the pipeline stage tag"""

    def format(self, record):
        # work on a copy: the same record reaches several handlers
        record = logging.makeLogRecord(record.__dict__)
        message = record.getMessage()
        if getattr(record, 'stage', None):
            message = f"[{record.stage}] {message}"
        record.msg, record.args = message, None
        return super().format(record)


def _has_file_handler(logger: logging.Logger, path: Path) -> bool:
    target = str(path.resolve())
    return any(
        isinstance(handler, logging.FileHandler) and handler.baseFilename == target
        for handler in logger.handlers
    )


def attach_file_logging(name: str, log_dir: Path, run_name: str) -> Tuple[logging.Logger, logging.Logger]:
    """
    Attach activity/error file handlers to the loggers 'activity.<name>' and 'errors.<name>'
    (or 'activity'/'errors' when name is empty)

    Args:
        name: Child logger suffix, e.g. a scheme name
        log_dir: Directory receiving the log files
        run_name: File name prefix

    Returns:
        (activity_logger, error_logger)
    """
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    suffix = f'.{name}' if name else ''

    activity_logger = logging.getLogger(f'activity{suffix}')
    activity_logger.setLevel(logging.INFO)
    activity_path = log_dir / f'{run_name}_activity.log'
    if not _has_file_handler(activity_logger, activity_path):
        handler = logging.FileHandler(activity_path, encoding='utf-8')
        handler.setFormatter(DetailedFormatter(ACTIVITY_FORMAT))
        activity_logger.addHandler(handler)

    error_logger = logging.getLogger(f'errors{suffix}')
    error_logger.setLevel(logging.WARNING)
    error_path = log_dir / f'{run_name}_errors.log'
    if not _has_file_handler(error_logger, error_path):
        handler = logging.FileHandler(error_path, encoding='utf-8')
        handler.setFormatter(DetailedFormatter(ERROR_FORMAT))
        error_logger.addHandler(handler)

    return activity_logger, error_logger


def setup_logging(log_dir: Optional[Path] = None, run_name: str = 'phaseless') -> Tuple[logging.Logger, logging.Logger]:
    """Setup activity and error loggers; file handlers only when log_dir is given"""
    if log_dir is not None:
        activity_logger, error_logger = attach_file_logging('', log_dir, run_name)
    else:
        activity_logger = logging.getLogger('activity')
        activity_logger.setLevel(logging.INFO)
        error_logger = logging.getLogger('errors')
        error_logger.setLevel(logging.WARNING)

    return activity_logger, error_logger
