from .settings import *

__all__ = [
    'CACHE_PATH', 'DEFAULT_JOBS', 'REPORT_TIMINGS',
    'ORACLE_MAX_GENUS', 'ORACLE_MAX_POINTS',
    'LOG_LEVEL', 'LOG_FILE', 'LOG_FORMAT'
]
