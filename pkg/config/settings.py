"""
File: config/settings.py
Purpose: Centralized configuration and constants
Dependencies: os, dotenv
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _int_setting(name: str, default: int, minimum: int) -> int:
    raw = os.environ.get(name, str(default))
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"❌ {name} must be an integer, got '{raw}'")
    if value < minimum:
        raise ValueError(f"❌ {name} must be >= {minimum}, got {value}")
    return value


# =============================================================================
# CORRELATOR CACHE CONFIGURATION
# =============================================================================
CACHE_PATH = os.environ.get('TAUT_CACHE_PATH', 'correlators.cache')

# =============================================================================
# SWEEP CONFIGURATION
# =============================================================================
DEFAULT_JOBS = _int_setting('TAUT_JOBS', 1, 1)
REPORT_TIMINGS = os.environ.get('REPORT_TIMINGS', '').lower() in ('1', 'true', 'yes', 'on')

# Range of the correlator cross-validation run by `oracle`
ORACLE_MAX_GENUS = _int_setting('ORACLE_MAX_GENUS', 3, 0)
ORACLE_MAX_POINTS = _int_setting('ORACLE_MAX_POINTS', 6, 1)

# =============================================================================
# LOGGING CONFIGURATION
# =============================================================================
LOG_LEVEL = os.environ.get('TAUT_LOG_LEVEL', 'INFO').upper()
LOG_FILE = os.environ.get('TAUT_LOG_FILE', 'tautcheck.log')
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

if LOG_LEVEL not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
    raise ValueError(f"❌ TAUT_LOG_LEVEL must be a logging level name, got '{LOG_LEVEL}'")
