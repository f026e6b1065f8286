"""
Settings for the indgap package.

Values are read once at import time, from the .env.local file first and
then from the process environment.
"""

import os
from pathlib import Path
from dotenv import dotenv_values


def _read_config_parameter(param_name: str) -> str | None:
    """
    Read a configuration parameter from the .env.local file without mutating the current environment.
    Note that it's important that the function reads the parameter from the .env.local file first,
    and then from the environment variables.
    Case-insensitive.
    """
    param_name = param_name.upper()
    file = Path(".env.local")
    env_map = dotenv_values(file) if file.exists() else {}
    value_from_env_local = env_map.get(param_name)
    value_from_env = os.getenv(param_name)
    return value_from_env_local or value_from_env or None


# Problems found while reading the parameters; the CLI reports them as configuration errors
CONFIG_ERRORS: list[str] = []


def _int_parameter(param_name: str, default: int) -> int:
    raw = _read_config_parameter(param_name)
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        CONFIG_ERRORS.append(f"{param_name.upper()} must be an integer, got {raw!r}")
        return default


# Working precision of every mpmath computation, in bits
PRECISION = _int_parameter('INDGAP_PRECISION', 256)

# Width requested for β enclosures
TOLERANCE = _read_config_parameter('INDGAP_TOLERANCE') or '1e-12'

# Series truncation order; 0 means 2n for the graph at hand
SERIES_ORDER = _int_parameter('INDGAP_ORDER', 0)

# Number of θ samples on [0, π]
GRID_SIZE = _int_parameter('INDGAP_GRID', 720)

# Exact computations keep a vertex set in one machine word
MAX_VERTICES = 64

LOG_LEVEL = (_read_config_parameter('INDGAP_LOG_LEVEL') or 'INFO').upper()

_log_file = _read_config_parameter('INDGAP_LOG_FILE')
LOG_FILE = Path(_log_file) if _log_file else Path('indgap.log')

# Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': LOG_LEVEL,
            'class': 'logging.FileHandler',
            'filename': LOG_FILE,
            'formatter': 'verbose',
            'delay': True,
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'indgap': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
