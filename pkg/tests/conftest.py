"""
Shared fixtures: an isolated correlator cache per test.
"""

import pytest

from config import settings
from core.intersect import IntersectionEngine, set_engine
from database.correlator_cache import CorrelatorCache


@pytest.fixture
def cache_path(tmp_path, monkeypatch):
    path = str(tmp_path / 'correlators.cache')
    monkeypatch.setenv('TAUT_CACHE_PATH', path)
    monkeypatch.setattr(settings, 'CACHE_PATH', path)
    return path


@pytest.fixture
def engine(cache_path):
    engine = IntersectionEngine(CorrelatorCache(cache_path))
    set_engine(engine)
    yield engine
    set_engine(None)
