"""
File: database/__init__.py
Location: tautcheck/database/__init__.py
Purpose: Database package initialization
"""

from .db_manager import CacheFileManager
from .correlator_cache import CorrelatorCache

__all__ = ['CacheFileManager', 'CorrelatorCache']
