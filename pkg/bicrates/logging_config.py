#!/usr/bin/env python3

"""
bicrates Logging Configuration

This module configures logging for bicrates using the LogLama package when it
is installed, and the standard logging module otherwise.
"""

import logging
import os
import sys

try:
    from loglama.config.env_loader import load_env, get_env
    from loglama.utils import configure_logging, LogContext
    LOGLAMA_AVAILABLE = True
except ImportError:
    LOGLAMA_AVAILABLE = False

_INITIALIZED = False


def _env(name, default):
    if LOGLAMA_AVAILABLE:
        return get_env(name, default)
    return os.environ.get(name, default)


def init_logging():
    """
    Initialize logging for bicrates.

    Safe to call more than once; only the first call installs handlers.
    Records go to stderr so CSV and report output on stdout stay clean.

    Returns:
        bool: True when LogLama handled the configuration.
    """
    global _INITIALIZED
    if _INITIALIZED:
        return LOGLAMA_AVAILABLE
    _INITIALIZED = True

    log_level = _env('BICRATES_LOG_LEVEL', 'WARNING').upper()

    if not LOGLAMA_AVAILABLE:
        logging.basicConfig(
            level=getattr(logging, log_level, logging.WARNING),
            format="%(asctime)s - %(levelname)7s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
            stream=sys.stderr,
        )
        return False

    load_env(verbose=False)
    log_dir = _env('BICRATES_LOG_DIR', os.path.join(os.getcwd(), 'logs'))
    json_format = _env('BICRATES_JSON_LOGS', 'false').lower() in ('true', 'yes', '1')
    file_enabled = _env('BICRATES_FILE_LOGGING', 'false').lower() in ('true', 'yes', '1')
    if file_enabled:
        os.makedirs(log_dir, exist_ok=True)

    logger = configure_logging(
        name='bicrates',
        level=log_level,
        console=True,
        file=file_enabled,
        file_path=os.path.join(log_dir, 'bicrates.log'),
        database=False,
        json=json_format,
        context_filter=True,
    )
    logger.debug('bicrates logging initialized with LogLama')
    return True


def get_logger(name=None):
    """
    Get a logger instance.

    Args:
        name (str, optional): Name of the logger. Defaults to 'bicrates'.

    Returns:
        Logger: A configured logger instance.
    """
    if not name:
        name = 'bicrates'
    elif not name.startswith('bicrates.'):
        name = f'bicrates.{name}'

    if LOGLAMA_AVAILABLE:
        from loglama import get_logger as loglama_get_logger
        return loglama_get_logger(name)
    return logging.getLogger(name)


def log_run_context(**fields):
    """
    Context manager adding run fields (subcommand, seed, ...) to log records.

    Falls back to a no-op context when LogLama is not available.
    """
    if not LOGLAMA_AVAILABLE:
        class DummyContext:
            def __enter__(self):
                return self

            def __exit__(self, exc_type, exc_val, exc_tb):
                pass
        return DummyContext()

    context = {key: value for key, value in fields.items() if value is not None}
    return LogContext(**context)
