"""
File: utils/validators.py
Location: tautcheck/utils/validators.py
Purpose: Input validation utilities for CLI parameters and class specifications
Reusable: YES - grid-axis parsing is independent of the moduli-space code
"""

from typing import List, Sequence


def _parse_bound(part: str, raw: str) -> int:
    raw = raw.strip()
    if not raw.isdigit():
        raise ValueError(f"Invalid number or range: {part!r}")
    return int(raw)


def parse_number_range(text: str) -> List[int]:
    """
    Expand a grid axis such as `--g 0-2,5` into its sorted values

    Items are nonnegative integers or inclusive `lo-hi` ranges, comma separated.
    A leading minus sign is rejected, so "-1" fails instead of meaning a range.

    Raises:
        ValueError: empty item, non-integer, negative value or lo > hi
    """
    values = set()
    for part in (p.strip() for p in text.split(',')):
        lo, sep, hi = part.partition('-')
        if not sep:
            values.add(_parse_bound(part, lo))
            continue
        start, end = _parse_bound(part, lo), _parse_bound(part, hi)
        if start > end:
            raise ValueError(f"Invalid range: {part} (start > end)")
        values.update(range(start, end + 1))
    return sorted(values)


def parse_exponents(text: str) -> tuple:
    """
    Parse a comma-separated exponent vector: "2,0,1" → (2, 0, 1)
    """
    try:
        values = tuple(int(x.strip()) for x in text.split(',') if x.strip())
    except ValueError as e:
        raise ValueError(f"Invalid exponent list: {text}") from e

    if not values:
        raise ValueError("Exponent list is empty")
    if any(x < 0 for x in values):
        raise ValueError(f"Exponents must be nonnegative: {text}")
    return values


def validate_b_spec(g: int, n: int, m: int, d: Sequence[int]) -> List[str]:
    """
    Check a (g, n, m, d) class specification

    Returns:
        list: human-readable problems (empty when the spec is valid)
    """
    problems = []

    if g < 0:
        problems.append(f"genus must be >= 0, got {g}")
    if n < 1:
        problems.append(f"n must be >= 1, got {n}")
    if m < 0:
        problems.append(f"m must be >= 0, got {m}")
    if len(d) != n:
        problems.append(f"expected {n} exponents, got {len(d)}")
    if any(x < 0 for x in d):
        problems.append("exponents must be nonnegative")
    if not problems and 2 * g - 2 + n + m <= 0:
        problems.append(f"M_{{{g},{n + m}}} is unstable (2g-2+n+m <= 0)")

    return problems
