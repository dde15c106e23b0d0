"""
File: utils/__init__.py
Location: tautcheck/utils/__init__.py
Purpose: Utilities package initialization
"""

from .validators import parse_number_range, parse_exponents, validate_b_spec
from .helpers import (
    format_fraction,
    parse_fraction,
    falling_factorial,
    weak_compositions,
    bounded_compositions,
    nonincreasing_tuples,
    subsets
)

__all__ = [
    'parse_number_range',
    'parse_exponents',
    'validate_b_spec',
    'format_fraction',
    'parse_fraction',
    'falling_factorial',
    'weak_compositions',
    'bounded_compositions',
    'nonincreasing_tuples',
    'subsets'
]
