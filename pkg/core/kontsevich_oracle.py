"""
File: core/kontsevich_oracle.py
Location: tautcheck/core/kontsevich_oracle.py
Purpose: Independent ψ-intersection recursion used to cross-check the main engine
Reusable: YES - self-contained, no shortcuts shared with core/intersect.py

Works with the normalized numbers F_g(i_1..i_n) = ⟨τ_{i_1}...τ_{i_n}⟩_g · ∏(2i_j+1)!!
and the topological recursion on the smallest index. Base data: F_0(0,0,0) = 1,
F_1(1) = 1/8. No string or dilaton reductions are used.
"""

import logging
from collections import Counter
from fractions import Fraction
from itertools import product
from math import comb, prod
from typing import Dict, Tuple

logger = logging.getLogger(__name__)


def double_factorial(k: int) -> int:
    """k!! with (-1)!! = 1."""
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


class KontsevichOracle:
    """
    Topological-recursion evaluator for ψ-class intersection numbers

    Features:
    - Exact Fraction arithmetic
    - Memo table keyed by (g, sorted indices)
    - Multiset splitting in the separating term (binomial multiplicities)
    """

    def __init__(self):
        self._memo: Dict[Tuple[int, Tuple[int, ...]], Fraction] = {}
        logger.debug("🔬 KontsevichOracle initialized")

    def normalized(self, g: int, indices: Tuple[int, ...]) -> Fraction:
        """F_g(indices); zero off the dimension."""
        n = len(indices)
        if g < 0 or 2 * g - 2 + n <= 0:
            return Fraction(0)
        if any(i < 0 for i in indices) or sum(indices) != 3 * g - 3 + n:
            return Fraction(0)

        key = (g, tuple(sorted(indices)))
        if key in self._memo:
            return self._memo[key]

        value = self._recurse(*key)
        self._memo[key] = value
        return value

    def _recurse(self, g: int, indices: Tuple[int, ...]) -> Fraction:
        n = len(indices)
        if g == 0 and n == 3:
            return Fraction(1)
        if g == 1 and n == 1:
            return Fraction(1, 8)

        first, rest = indices[0], indices[1:]
        counts = sorted(Counter(rest).items())

        # merge the first index with another one
        s1 = Fraction(0)
        for value, mult in counts:
            remaining = list(rest)
            remaining.remove(value)
            merged = first + value - 1
            if merged >= 0:
                s1 += mult * (2 * value + 1) * self.normalized(g, (merged,) + tuple(remaining))

        # non-separating: cut a handle
        s2 = Fraction(0)
        if g >= 1 and first >= 2:
            for a in range(first - 1):
                b = first - 2 - a
                s2 += self.normalized(g - 1, (a, b) + rest)

        # separating: split the curve in two
        s3 = Fraction(0)
        if first >= 2:
            values = [v for v, _ in counts]
            mults = [m for _, m in counts]
            for chosen in product(*(range(m + 1) for m in mults)):
                left = tuple(v for v, c in zip(values, chosen) for _ in range(c))
                right = tuple(v for v, m, c in zip(values, mults, chosen) for _ in range(m - c))
                multiplicity = prod(comb(m, c) for m, c in zip(mults, chosen))
                for g1 in range(g + 1):
                    for a in range(first - 1):
                        b = first - 2 - a
                        f1 = self.normalized(g1, (a,) + left)
                        if f1 == 0:
                            continue
                        s3 += multiplicity * f1 * self.normalized(g - g1, (b,) + right)

        return s1 + (s2 + s3) / 2

    def correlator(self, g: int, exponents: Tuple[int, ...]) -> Fraction:
        """⟨τ_{d_1}...τ_{d_n}⟩_g through the normalized recursion."""
        value = self.normalized(g, tuple(exponents))
        if value == 0:
            return value
        return value / prod(double_factorial(2 * d + 1) for d in exponents)
