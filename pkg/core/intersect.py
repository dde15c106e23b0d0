"""
File: core/intersect.py
Location: tautcheck/core/intersect.py
Purpose: ψ-class intersection numbers and pairings of tree classes against ψ-monomials
Dependencies: database/correlator_cache.py (persistent memo)

Correlators: genus-0 closed form, string and dilaton reductions, then the
Dijkgraaf–Verlinde–Verlinde recursion on the largest exponent. Pairings
factor over tree vertices; edge half-edges contribute only their own
exponent.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Callable, List, Optional, Sequence, Tuple

from core.graph_core import TautClass, forgetful_pullback
from core.kontsevich_oracle import KontsevichOracle, double_factorial
from core.outcome import OracleMismatchError
from database.correlator_cache import CorrelatorCache, make_key
from utils.helpers import format_fraction, nonincreasing_tuples, weak_compositions

logger = logging.getLogger(__name__)


class IntersectionEngine:
    """
    Memoized ⟨τ_{d_1}...τ_{d_n}⟩_g evaluator

    Features:
    - Persistent cache (only dimension-matched keys are stored)
    - Zero for off-dimension keys, error for unstable (g, n)
    - Recursion never calls the public entry point, so unstable
      sub-correlators inside the recursion count as 0
    """

    def __init__(self, cache: Optional[CorrelatorCache] = None):
        self.cache = cache if cache is not None else CorrelatorCache()
        logger.info(f"🧮 IntersectionEngine initialized (cache={self.cache.path or 'in-memory'})")

    def correlator(self, g: int, exponents: Sequence[int]) -> Fraction:
        """
        ⟨∏τ_{d_i}⟩_g

        Raises:
            ValueError: for unstable (g, n) or negative exponents
        """
        n = len(exponents)
        if g < 0 or 2 * g - 2 + n <= 0:
            raise ValueError(f"❌ Unstable moduli space M_{{{g},{n}}}")
        if any(d < 0 for d in exponents):
            raise ValueError(f"❌ Negative exponent in {tuple(exponents)}")
        return self.value(g, exponents)

    def value(self, g: int, exponents: Sequence[int]) -> Fraction:
        n = len(exponents)
        if g < 0 or 2 * g - 2 + n <= 0:
            return Fraction(0)
        if sum(exponents) != 3 * g - 3 + n or any(d < 0 for d in exponents):
            return Fraction(0)

        key = make_key(g, exponents)
        cached = self.cache.get(key)
        if cached is not None:
            return cached

        result = self._compute(*key)
        self.cache.put(key, result)
        return result

    def _compute(self, g: int, exps: Tuple[int, ...]) -> Fraction:
        n = len(exps)

        if g == 0:
            return Fraction(factorial(n - 3), prod(factorial(d) for d in exps))

        if g == 1 and exps == (1,):
            return Fraction(1, 24)

        if exps[0] == 0:
            # string equation
            rest = exps[1:]
            total = Fraction(0)
            for j, d in enumerate(rest):
                if d >= 1:
                    total += self.value(g, rest[:j] + (d - 1,) + rest[j + 1:])
            return total

        if exps[0] == 1:
            # dilaton equation
            return (2 * g - 2 + n - 1) * self.value(g, exps[1:])

        return self._dvv(g, exps)

    def _dvv(self, g: int, exps: Tuple[int, ...]) -> Fraction:
        k = exps[-1] - 1
        others = exps[:-1]
        total = Fraction(0)

        for j, d in enumerate(others):
            rest = others[:j] + others[j + 1:]
            coeff = Fraction(double_factorial(2 * k + 2 * d + 1), double_factorial(2 * d - 1))
            total += coeff * self.value(g, rest + (d + k,))

        split_total = Fraction(0)
        for r in range(k):
            s = k - 1 - r
            coeff = double_factorial(2 * r + 1) * double_factorial(2 * s + 1)
            inner = self.value(g - 1, others + (r, s)) if g >= 1 else Fraction(0)
            for mask in range(1 << len(others)):
                left = tuple(d for i, d in enumerate(others) if mask >> i & 1)
                right = tuple(d for i, d in enumerate(others) if not mask >> i & 1)
                for g1 in range(g + 1):
                    f1 = self.value(g1, (r,) + left)
                    if f1:
                        inner += f1 * self.value(g - g1, (s,) + right)
            split_total += coeff * inner

        total += split_total / 2
        return total / double_factorial(2 * k + 3)


# =============================================================================
# DEFAULT ENGINE
# =============================================================================

_ENGINE: Optional[IntersectionEngine] = None


def get_engine() -> IntersectionEngine:
    global _ENGINE
    if _ENGINE is None:
        _ENGINE = IntersectionEngine()
    return _ENGINE


def set_engine(engine: IntersectionEngine):
    global _ENGINE
    _ENGINE = engine


def correlator(g: int, *exponents: int) -> Fraction:
    """⟨τ_{d_1}...τ_{d_n}⟩_g on the default engine."""
    return get_engine().correlator(g, exponents)


# =============================================================================
# PAIRING
# =============================================================================

def pair(c: TautClass, exponents: Sequence[int],
         engine: Optional[IntersectionEngine] = None) -> Fraction:
    """
    ∫ c · ∏ψ_i^{a_i}, factorized over the vertices of every term

    A leg contributes its own exponent plus a_i; an edge half-edge only its own.
    """
    if len(exponents) != c.n:
        raise ValueError(f"❌ Expected {c.n} exponents, got {len(exponents)}")
    engine = engine or get_engine()
    dimension = 3 * c.genus - 3 + c.n
    target = dimension - sum(exponents)

    total = Fraction(0)
    for tree, coeff in c.terms.items():
        if tree.degree != target:
            continue
        value = coeff
        for v in range(tree.n_vertices):
            vertex_exps = [tree.leg_psi[i - 1] + exponents[i - 1] for i in tree.legs_at(v)]
            vertex_exps.extend(tree.edge_psi[j][side] for j, side, _ in tree.adjacency[v])
            value *= engine.value(tree.genera[v], vertex_exps)
            if not value:
                break
        total += value
    return total


@dataclass
class SweepReport:
    """Result of pairing a class against every complementary ψ-monomial"""
    degree: Optional[int]
    dimension: int
    checked: int = 0
    vacuous: bool = False
    nonzero: List[Tuple[Tuple[int, ...], Fraction]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.nonzero

    def witnesses(self, limit: int = 10) -> List[dict]:
        return [{"exponents": list(exps), "value": format_fraction(value)}
                for exps, value in self.nonzero[:limit]]


def vanishing_sweep(c: TautClass, degree: Optional[int] = None,
                    engine: Optional[IntersectionEngine] = None) -> SweepReport:
    """
    Pair a homogeneous class with all ψ-monomials of complementary degree

    Args:
        degree: expected class degree; needed to classify the zero class

    Raises:
        ValueError: on a mixed-degree class
    """
    if not c.is_homogeneous():
        raise ValueError(f"❌ vanishing_sweep needs a homogeneous class, got degrees {c.degrees()}")

    dimension = 3 * c.genus - 3 + c.n
    if c.degree is not None:
        degree = c.degree
    report = SweepReport(degree=degree, dimension=dimension)

    if degree is None:
        return report
    if degree > dimension:
        report.vacuous = True
        return report
    if c.is_zero():
        report.checked = sum(1 for _ in weak_compositions(dimension - degree, c.n))
        return report

    for exps in weak_compositions(dimension - degree, c.n):
        report.checked += 1
        value = pair(c, exps, engine)
        if value:
            report.nonzero.append((exps, value))
    return report


def pairing_difference(c1: TautClass, c2: TautClass, degree: Optional[int] = None,
                       engine: Optional[IntersectionEngine] = None) -> SweepReport:
    """Pairing-level comparison of two classes on the same space."""
    return vanishing_sweep(c1 - c2, degree, engine)


# =============================================================================
# CONSISTENCY IDENTITIES
# =============================================================================

Evaluator = Callable[[int, Tuple[int, ...]], Fraction]


def string_identity_holds(g: int, exponents: Sequence[int], lhs: Evaluator, rhs: Evaluator) -> bool:
    """⟨τ_0 ∏τ_{d_i}⟩_g = Σ_j ⟨...τ_{d_j-1}...⟩_g"""
    exps = tuple(exponents)
    expected = sum((rhs(g, exps[:j] + (d - 1,) + exps[j + 1:])
                    for j, d in enumerate(exps) if d >= 1), Fraction(0))
    return lhs(g, (0,) + exps) == expected


def dilaton_identity_holds(g: int, exponents: Sequence[int], lhs: Evaluator, rhs: Evaluator) -> bool:
    """⟨τ_1 ∏τ_{d_i}⟩_g = (2g-2+n)⟨∏τ_{d_i}⟩_g"""
    exps = tuple(exponents)
    return lhs(g, (1,) + exps) == (2 * g - 2 + len(exps)) * rhs(g, exps)


def pullback_adjunction_holds(c: TautClass, exponents: Sequence[int],
                              engine: Optional[IntersectionEngine] = None) -> bool:
    """
    ⟨π*c · M⟩ = ⟨c · π_*M⟩ for a ψ-monomial M on M_{g,n+1}

    The exponent on the forgotten point must be 0 (string) or 1 (dilaton).
    """
    exps = tuple(exponents)
    if len(exps) != c.n + 1 or exps[-1] not in (0, 1):
        raise ValueError(f"❌ Need {c.n + 1} exponents ending in 0 or 1, got {exps}")

    lhs = pair(forgetful_pullback(c), exps, engine)
    base = exps[:-1]
    if exps[-1] == 1:
        rhs = (2 * c.genus - 2 + c.n) * pair(c, base, engine)
    else:
        rhs = sum((pair(c, base[:j] + (d - 1,) + base[j + 1:], engine)
                   for j, d in enumerate(base) if d >= 1), Fraction(0))
    return lhs == rhs


def dimension_matched_keys(max_genus: int, max_points: int):
    """Every (g, sorted exponents) with g <= max_genus, 1 <= n <= max_points, stable."""
    for g in range(max_genus + 1):
        for n in range(1, max_points + 1):
            if 2 * g - 2 + n <= 0:
                continue
            for exps in nonincreasing_tuples(3 * g - 3 + n, n):
                yield g, tuple(reversed(exps))


def cross_validate(max_genus: int, max_points: int,
                   engine: Optional[IntersectionEngine] = None,
                   oracle: Optional[KontsevichOracle] = None) -> int:
    """
    Compare the main engine with the independent recursion

    Returns:
        int: number of keys compared

    Raises:
        OracleMismatchError: on the first disagreement
    """
    engine = engine or get_engine()
    oracle = oracle or KontsevichOracle()
    checked = 0
    for g, exps in dimension_matched_keys(max_genus, max_points):
        main = engine.value(g, exps)
        other = oracle.correlator(g, exps)
        if main != other:
            raise OracleMismatchError(
                f"❌ ⟨{exps}⟩_{g}: engine {format_fraction(main)} vs oracle {format_fraction(other)}"
            )
        checked += 1
    logger.info(f"✅ Correlator cross-validation passed on {checked} keys (g<={max_genus}, n<={max_points})")
    return checked


def consistency_sweep(max_genus: int, max_points: int,
                      engine: Optional[IntersectionEngine] = None) -> int:
    """
    Re-derive the string and dilaton equations on every key in range

    Keys whose reduced correlator would be unstable are skipped.

    Raises:
        OracleMismatchError: on the first key breaking either identity
    """
    engine = engine or get_engine()
    checked = 0
    for g, exps in dimension_matched_keys(max_genus, max_points):
        for marker, holds in ((0, string_identity_holds), (1, dilaton_identity_holds)):
            if marker not in exps:
                continue
            j = exps.index(marker)
            rest = exps[:j] + exps[j + 1:]
            if 2 * g - 2 + len(rest) <= 0:
                continue
            if not holds(g, rest, engine.value, engine.value):
                name = 'string' if marker == 0 else 'dilaton'
                raise OracleMismatchError(f"❌ {name} equation fails at ⟨{exps}⟩_{g}")
            checked += 1
    logger.info(f"✅ String/dilaton consistency held on {checked} keys")
    return checked
