#!/usr/bin/env python3

"""
Configuration for bicrates.

Numeric defaults are module-level constants read from the environment (after
loading a ``.env`` file if one exists) with fallbacks.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

from bicrates.logging_config import init_logging, get_logger

load_dotenv()
init_logging()

logger = get_logger('config')


def _float(name, default):
    return float(os.environ.get(name, default))


def _int(name, default):
    return int(os.environ.get(name, default))


# Tolerances (bits)
DEFAULT_TOL = _float('BICRATES_TOL', 1e-9)
DEDUPE_TOL = _float('BICRATES_DEDUPE_TOL', 1e-9)

# Sweeps and searches
DEFAULT_GRID = _int('BICRATES_GRID', 201)
DEFAULT_SEED = _int('BICRATES_SEED', 0)
DEFAULT_SAMPLES = _int('BICRATES_SAMPLES', 10000)
DEFAULT_BUDGET = _int('BICRATES_BUDGET', 64)
MC_BOX_INFLATION = _float('BICRATES_MC_BOX_INFLATION', 0.1)

# Gap certificates
GAP_LIMIT = 0.5
GAP_SLACK = _float('BICRATES_GAP_SLACK', 1e-6)

# Output
PRECISION = _int('BICRATES_PRECISION', 6)
UNIT = 'bits'

logger.debug("bicrates configuration loaded", extra={
    'context': {
        'tol': DEFAULT_TOL,
        'dedupe_tol': DEDUPE_TOL,
        'grid': DEFAULT_GRID,
        'seed': DEFAULT_SEED,
        'samples': DEFAULT_SAMPLES,
        'budget': DEFAULT_BUDGET,
        'precision': PRECISION,
    }
})


ENV_TEMPLATE = """# bicrates environment configuration
BICRATES_LOG_LEVEL=WARNING
BICRATES_LOG_DIR=./logs
BICRATES_FILE_LOGGING=false
BICRATES_JSON_LOGS=false
BICRATES_TOL=1e-9
BICRATES_DEDUPE_TOL=1e-9
BICRATES_GRID=201
BICRATES_SEED=0
BICRATES_SAMPLES=10000
BICRATES_BUDGET=64
BICRATES_MC_BOX_INFLATION=0.1
BICRATES_GAP_SLACK=1e-6
BICRATES_PRECISION=6
"""


def create_example_env_file(path):
    """
    Write a ``.env`` template listing every variable bicrates reads.

    Refuses to overwrite an existing file.

    Returns:
        Path: the written file.
    """
    path = Path(path).expanduser()
    if path.exists():
        raise FileExistsError(f"{path} already exists")
    path.write_text(ENV_TEMPLATE)
    logger.info(f"Wrote example environment file to {path}")
    return path
