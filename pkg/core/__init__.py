"""
File: core/__init__.py
Location: tautcheck/core/__init__.py
Purpose: Core logic package initialization

Only dependency-free modules are re-exported here; core.intersect and
everything above it import the database package, which imports
core.outcome.
"""

from .graph_core import DecoratedTree, TautClass
from .outcome import (
    CacheConflictError,
    DivisibilityError,
    InconsistencyError,
    OracleMismatchError,
    OutcomeClassifier,
)

__all__ = [
    'DecoratedTree',
    'TautClass',
    'InconsistencyError',
    'DivisibilityError',
    'CacheConflictError',
    'OracleMismatchError',
    'OutcomeClassifier'
]
