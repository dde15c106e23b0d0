"""
File: utils/helpers.py
Location: tautcheck/utils/helpers.py
Purpose: Small exact-arithmetic and combinatorial helpers shared by every module
Reusable: YES - Copy for any project iterating over compositions or printing fractions
"""

from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional, Sequence, Tuple


def format_fraction(value) -> str:
    """
    Render a rational number as an exact "num/den" string

    Examples:
        format_fraction(Fraction(1, 24)) → "1/24"
        format_fraction(3) → "3/1"
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    """
    Parse "num/den" (or a bare integer) into a reduced Fraction

    Raises:
        ValueError: on malformed input or zero denominator
    """
    text = text.strip()
    if not text:
        raise ValueError("Empty rational string")

    if '/' in text:
        num, den = text.split('/', 1)
        try:
            num_int, den_int = int(num), int(den)
        except ValueError as e:
            raise ValueError(f"Invalid rational: {text}") from e
        if den_int == 0:
            raise ValueError(f"Zero denominator: {text}")
        return Fraction(num_int, den_int)

    try:
        return Fraction(int(text))
    except ValueError as e:
        raise ValueError(f"Invalid rational: {text}") from e


def falling_factorial(base: int, length: int) -> int:
    """(a)_n = a(a-1)...(a-n+1); (a)_0 = 1 for every integer a."""
    if length < 0:
        raise ValueError(f"Negative Pochhammer length: {length}")
    result = 1
    for i in range(length):
        result *= base - i
    return result


def weak_compositions(total: int, parts: int,
                      caps: Optional[Sequence[Optional[int]]] = None) -> Iterator[Tuple[int, ...]]:
    """
    All tuples of `parts` nonnegative integers summing to `total`

    Args:
        caps: optional per-slot upper bounds (None = unbounded)

    Yields tuples in lexicographically decreasing order of the first slot.
    """
    if total < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return

    cap = total
    if caps is not None and caps[0] is not None:
        cap = min(cap, caps[0])
    rest_caps = caps[1:] if caps is not None else None

    for first in range(cap, -1, -1):
        for rest in weak_compositions(total - first, parts - 1, rest_caps):
            yield (first,) + rest


def bounded_compositions(limit: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers with sum <= limit."""
    for total in range(limit + 1):
        yield from weak_compositions(total, parts)


def nonincreasing_tuples(total: int, parts: int, floor: int = 0) -> Iterator[Tuple[int, ...]]:
    """Non-increasing tuples of length `parts`, entries >= floor, summing to total."""
    def _rec(remaining, slots, upper):
        if slots == 0:
            if remaining == 0:
                yield ()
            return
        top = min(upper, remaining - floor * (slots - 1))
        for first in range(top, floor - 1, -1):
            for rest in _rec(remaining - first, slots - 1, first):
                yield (first,) + rest

    if total < floor * parts:
        return
    yield from _rec(total, parts, total)


def subsets(items: Sequence) -> Iterator[Tuple]:
    """Every subset of `items`, as tuples in input order."""
    for size in range(len(items) + 1):
        yield from combinations(items, size)
