"""
File: core/dr_side.py
Location: tautcheck/core/dr_side.py
Purpose: Double-ramification side of the one- and zero-frozen-leg relations, in genus 0
Dependencies: sympy (polynomials in a_1..a_n, exact division by Σa_i)

In genus 0 every DR cycle is the fundamental class and λ_0 = 1, so
Ǎ^k_0 = Σ_{T ∈ SRT^k_{0,n,1}} C(T) ∏_{mother halves} a(h) [T]. Flows and
C(T) are computed for any genus; only the class builders are genus 0.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Dict, List, Sequence, Tuple

from sympy import Poly, Rational, div, symbols

from core.graph_core import DecoratedTree, TautClass, forgetful_pushforward_nopsi
from core.outcome import DivisibilityError
from core.tree_enum import RootedView, enum_dr_trees

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


# =============================================================================
# LINEAR FORMS AND FLOWS
# =============================================================================

@dataclass(frozen=True)
class LinearForm:
    """Integer linear form Σ c_i a_i, stored as sorted (i, c_i) pairs with c_i != 0"""
    coeffs: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, mapping: Dict[int, int]) -> 'LinearForm':
        return cls(tuple(sorted((i, c) for i, c in mapping.items() if c)))

    @classmethod
    def variable(cls, i: int) -> 'LinearForm':
        return cls(((i, 1),))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.coeffs)

    def __add__(self, other: 'LinearForm') -> 'LinearForm':
        total = defaultdict(int, self.as_dict())
        for i, c in other.coeffs:
            total[i] += c
        return LinearForm.from_dict(total)

    def __neg__(self) -> 'LinearForm':
        return LinearForm(tuple((i, -c) for i, c in self.coeffs))

    def __sub__(self, other: 'LinearForm') -> 'LinearForm':
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.coeffs

    def substitute_frozen(self, n: int) -> 'LinearForm':
        """a_{n+1} := -(a_1 + ... + a_n)"""
        mapping = self.as_dict()
        frozen = mapping.pop(n + 1, 0)
        if frozen:
            for i in range(1, n + 1):
                mapping[i] = mapping.get(i, 0) - frozen
        return LinearForm.from_dict(mapping)

    def to_sympy(self, variables: Sequence):
        return sum((c * variables[i - 1] for i, c in self.coeffs), 0)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*a{i}" for i, c in self.coeffs)


def _leg_sum(legs) -> LinearForm:
    return LinearForm.from_dict({i: 1 for i in legs})


@dataclass
class FlowTree:
    """
    A tree of SRT^k_{g,n,1} with the flow a(h) on every half-edge

    Keys: ('leg', i) for legs 1..n+1, ('edge', j) for the mother-side half
    of edge j and ('back', j) for its child-side half.
    """
    tree: DecoratedTree
    n: int
    flows: Dict[Tuple[str, int], LinearForm] = field(default_factory=dict)

    def edge_flow(self, j: int) -> LinearForm:
        return self.flows[('edge', j)]

    def vertex_sum(self, v: int) -> LinearForm:
        view = RootedView(self.tree, self.n)
        total = LinearForm()
        for label in self.tree.legs_at(v):
            total = total + self.flows[('leg', label)]
        for j, _, _ in self.tree.adjacency[v]:
            key = ('edge', j) if view.mother_of_edge[j] == v else ('back', j)
            total = total + self.flows[key]
        return total

    def conserves_flow(self) -> bool:
        """Flow balance at every vertex and antisymmetry along every edge."""
        for j in range(len(self.tree.edges)):
            if not (self.flows[('edge', j)] + self.flows[('back', j)]).is_zero():
                return False
        return all(self.vertex_sum(v).is_zero() for v in range(self.tree.n_vertices))


def compute_flows(tree: DecoratedTree, n: int) -> FlowTree:
    """
    Flows of a rooted tree with regular legs 1..n and frozen leg n+1 on the root

    a(σ_i) = a_i, a(σ_{n+1}) = -Σa_i; the mother-side half of an edge
    carries the sum of the legs below it.
    """
    view = RootedView(tree, n)
    result = FlowTree(tree=tree, n=n)
    for i in range(1, n + 1):
        result.flows[('leg', i)] = LinearForm.variable(i)
    result.flows[('leg', n + 1)] = LinearForm.variable(n + 1).substitute_frozen(n)

    for j in range(len(tree.edges)):
        below = view.subtree[view.child_of_edge[j]]
        form = _leg_sum(i for i in range(1, n + 1) if tree.legs[i - 1] in below)
        result.flows[('edge', j)] = form
        result.flows[('back', j)] = -form
    return result


def c_coefficient(tree: DecoratedTree) -> Fraction:
    """C(T) = ∏_v r(v) / Σ_{Desc[v]} r, with r(v) = 2g(v) - 2 + n(v)"""
    view = RootedView(tree, 0)
    r = [2 * tree.genera[v] - 2 + tree.valence(v) for v in range(tree.n_vertices)]
    value = Fraction(1)
    for v in range(tree.n_vertices):
        value *= Fraction(r[v], sum(r[u] for u in view.subtree[v]))
    return value


# =============================================================================
# POLYNOMIAL CLASSES
# =============================================================================

@dataclass
class PolyClass:
    """Polynomial in a_1..a_n with TautClass coefficients on M_{g,N}"""
    genus: int
    n_points: int
    n_vars: int
    terms: Dict[Monomial, TautClass] = field(default_factory=dict)

    def coefficient(self, monomial: Sequence[int]) -> TautClass:
        return self.terms.get(tuple(monomial), TautClass.zero(self.genus, self.n_points))

    def degrees(self) -> List[int]:
        return sorted({sum(mono) for mono, c in self.terms.items() if c})

    def is_zero(self) -> bool:
        return not any(self.terms.values())


def _variables(n: int):
    return symbols(f'a1:{n + 1}')


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def _assemble(genus: int, n_points: int, n_vars: int,
              items: Dict[Monomial, List[Tuple[DecoratedTree, Fraction]]]) -> PolyClass:
    terms = {}
    for mono in sorted(items):
        c = TautClass.from_terms(genus, n_points, items[mono])
        if c:
            terms[mono] = c
    return PolyClass(genus, n_points, n_vars, terms)


@lru_cache(maxsize=256)
def check_a_polynomial(n: int, k: int) -> PolyClass:
    """
    Ǎ^k_0(a_1, ..., a_n, -Σa_i) on M_{0,n+1}

    Raises:
        ValueError: when M_{0,n+1} is unstable
    """
    if n + 1 < 3:
        raise ValueError(f"❌ M_{{0,{n + 1}}} is unstable")
    a = _variables(n)
    items: Dict[Monomial, List[Tuple[DecoratedTree, Fraction]]] = defaultdict(list)

    trees = enum_dr_trees(0, n, k)
    for tree in trees:
        flows = compute_flows(tree, n)
        weight = c_coefficient(tree)
        expr = prod((flows.edge_flow(j).to_sympy(a) for j in range(len(tree.edges))), start=1)
        for mono, coeff in Poly(expr, *a).terms():
            items[tuple(mono)].append((tree.unrooted(), weight * _to_fraction(coeff)))

    logger.debug(f"📊 Ǎ^{k}_0 on M_{{0,{n + 1}}}: {len(trees)} trees, {len(items)} monomials")
    return _assemble(0, n + 1, n, items)


def pushforward_polyclass(poly: PolyClass, forgotten_leg: int) -> PolyClass:
    """Apply the ψ-free forgetful pushforward to every coefficient."""
    terms = {}
    for mono, c in poly.terms.items():
        pushed = forgetful_pushforward_nopsi(c, forgotten_leg)
        if pushed:
            terms[mono] = pushed
    return PolyClass(poly.genus, poly.n_points - 1, poly.n_vars, terms)


def divide_by_leg_sum(poly: PolyClass) -> PolyClass:
    """
    Exact division by a_1 + ... + a_n, one tree at a time

    Raises:
        DivisibilityError: when some tree's polynomial leaves a remainder
    """
    a = _variables(poly.n_vars)
    divisor = Poly(sum(a), *a)

    per_tree: Dict[DecoratedTree, object] = defaultdict(int)
    for mono, c in poly.terms.items():
        monomial = prod((x ** e for x, e in zip(a, mono)), start=1)
        for tree, coeff in c.terms.items():
            per_tree[tree] += Rational(coeff.numerator, coeff.denominator) * monomial

    items: Dict[Monomial, List[Tuple[DecoratedTree, Fraction]]] = defaultdict(list)
    for tree, expr in per_tree.items():
        quotient, remainder = div(Poly(expr, *a), divisor)
        if not remainder.is_zero:
            raise DivisibilityError(
                f"❌ Polynomial coefficient of a tree with genera {tree.genera} is not divisible by Σa_i "
                f"(remainder {remainder.as_expr()})"
            )
        for mono, coeff in quotient.terms():
            items[tuple(mono)].append((tree, _to_fraction(coeff)))

    return _assemble(poly.genus, poly.n_points, poly.n_vars, items)


# =============================================================================
# GENUS-0 CLASSES
# =============================================================================

def a1_class_genus0(n: int, d: Sequence[int]) -> TautClass:
    """
    Coef_{a^d̄} Ǎ^{Σd+1}_0 on M_{0,n+1}

    Raises:
        ValueError: on negative exponents, a wrong length or an unstable space
    """
    d = tuple(d)
    if len(d) != n or any(x < 0 for x in d):
        raise ValueError(f"❌ Expected {n} nonnegative exponents, got {d}")
    return check_a_polynomial(n, sum(d) + 1).coefficient(d)


def a0_class_genus0(n: int, d: Sequence[int]) -> TautClass:
    """
    Coef_{a^d̄} (π_* Ǎ^{Σd+2}_0) / Σa_i on M_{0,n}

    Raises:
        ValueError: on negative exponents, a wrong length or n < 3
        DivisibilityError: if the pushed-forward polynomial is not divisible
    """
    d = tuple(d)
    if len(d) != n or any(x < 0 for x in d):
        raise ValueError(f"❌ Expected {n} nonnegative exponents, got {d}")
    if n < 3:
        raise ValueError(f"❌ M_{{0,{n}}} is unstable")

    checked = check_a_polynomial(n, sum(d) + 2)
    pushed = pushforward_polyclass(checked, n + 1)
    return divide_by_leg_sum(pushed).coefficient(d)
