"""
File: core/b_classes.py
Location: tautcheck/core/b_classes.py
Purpose: The classes B^m_{g,d̄} and B̃^m_{g,d̄}, the one-point chain classes and the ψ-relations
Dependencies: core/tree_enum.py (index sets), core/graph_core.py (class algebra), sympy (monomial coefficients)

B^m is built two independent ways (from balanced admissible trees with
extra legs pushed forward, and from the level/string coefficient formula)
and B̃^m two more (extra-leg pushforward over nondegenerate trees, and the
x-monomial coefficient of P_{g,n,m}). Each pair must agree exactly.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Poly, symbols

from core.graph_core import (
    DecoratedTree,
    TautClass,
    chain_tree,
    class_sum,
    diamond,
    psi_multiply,
    single_vertex_class,
)
from core.tree_enum import (
    ExponentAssignment,
    RootedView,
    enum_admissible,
    enum_chains,
    enum_gamma_chains,
    enum_levels,
    enum_srt,
    rooted_view,
)
from utils.helpers import bounded_compositions, falling_factorial, weak_compositions
from utils.validators import validate_b_spec

logger = logging.getLogger(__name__)

ExponentCombination = Dict[Tuple[int, ...], Fraction]


@dataclass(frozen=True)
class BSpec:
    """(g, n, m, d̄): the class lives on M_{g,n+m}, legs n+1..n+m are frozen"""
    g: int
    n: int
    m: int
    d: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'd', tuple(self.d))

    @property
    def degree(self) -> int:
        return sum(self.d)

    @property
    def dimension(self) -> int:
        return 3 * self.g - 3 + self.n + self.m

    def validate(self):
        """
        Raises:
            ValueError: listing every problem with the spec
        """
        problems = validate_b_spec(self.g, self.n, self.m, self.d)
        if problems:
            raise ValueError(f"❌ Invalid spec {self}: {'; '.join(problems)}")

    def as_dict(self) -> dict:
        return {"g": self.g, "n": self.n, "m": self.m, "d": list(self.d)}


# =============================================================================
# STRING EQUATION
# =============================================================================

def pochhammer(base: int, length: int) -> int:
    """(a)_n = a(a-1)...(a-n+1), (a)_0 = 1."""
    return falling_factorial(base, length)


def string_pushforward(g: int, exponents: Sequence[int], forget_count: int) -> ExponentCombination:
    """
    π_* of ∏ψ_i^{q_i} along the map forgetting `forget_count` extra points

    Stable target: Σ over 0 <= p_i <= q_i with Σ(q_i - p_i) = forget_count
    of forget_count! / ∏(q_i - p_i)!. For a (0, 2) target the formal
    convention applies: ψ_1^{forget_count-1} pushes to the marker (-1, 0);
    every other unstable case is zero.
    """
    exps = tuple(exponents)
    k = len(exps)
    if forget_count == 0:
        return {exps: Fraction(1)}

    if 2 * g - 2 + k <= 0:
        if g == 0 and k == 2 and exps == (forget_count - 1, 0):
            return {(-1, 0): Fraction(1)}
        return {}

    total = sum(exps) - forget_count
    if total < 0:
        return {}

    result = {}
    for p in weak_compositions(total, k, caps=exps):
        result[p] = Fraction(factorial(forget_count), prod(factorial(q - x) for q, x in zip(exps, p)))
    return result


def _push_extra_legs(view: RootedView, q: ExponentAssignment) -> Iterator[Tuple[ExponentAssignment, Fraction]]:
    """
    Forget the extra legs of every non-root vertex

    The root keeps p = q; vertex v forgets q(mother half) + 1 points. A
    potentially unstable vertex yields p = -1 on its single outgoing half.
    """
    per_vertex = []
    for v in view.preorder:
        outgoing = view.outgoing[v]
        if v == view.root:
            per_vertex.append([({h: q[h] for h in outgoing}, Fraction(1))])
            continue

        incoming = q[('edge', view.parent_edge[v])]
        pushed = string_pushforward(view.tree.genera[v], tuple(q[h] for h in outgoing) + (0,), incoming + 1)
        if not pushed:
            return
        per_vertex.append([(dict(zip(outgoing, exps[:-1])), coeff) for exps, coeff in pushed.items()])

    for choice in product(*per_vertex):
        p: ExponentAssignment = {}
        coeff = Fraction(1)
        for part, c in choice:
            p.update(part)
            coeff *= c
        yield p, coeff


def _contract_unstable(view: RootedView, p: ExponentAssignment) -> DecoratedTree:
    """
    Drop the (0, 2) vertices, keeping the mother-side exponent

    A chain of such vertices ending in leg i moves leg i onto the first
    stable ancestor; one ending at a stable vertex becomes a single edge.
    """
    tree = view.tree
    n = view.n
    unstable = {v for v in range(tree.n_vertices) if view.is_potentially_unstable(v)}
    keep = [v for v in view.preorder if v not in unstable]
    index = {v: i for i, v in enumerate(keep)}

    legs = list(tree.legs)
    leg_psi = [p.get(('leg', i), 0) if i <= n else 0 for i in range(1, tree.n_legs + 1)]
    edges: List[Tuple[int, int]] = []
    edge_psi: List[Tuple[int, int]] = []

    for j in range(len(tree.edges)):
        mother = view.mother_of_edge[j]
        if mother in unstable:
            continue
        exponent = p[('edge', j)]
        child = view.child_of_edge[j]
        while child is not None and child in unstable:
            (kind, idx), = view.outgoing[child]
            if kind == 'leg':
                legs[idx - 1] = mother
                leg_psi[idx - 1] = exponent
                child = None
            else:
                child = view.child_of_edge[idx]
        if child is not None:
            edges.append((index[mother], index[child]))
            edge_psi.append((exponent, 0))

    return DecoratedTree(
        genera=tuple(tree.genera[v] for v in keep),
        legs=tuple(index[v] for v in legs),
        edges=tuple(edges),
        leg_psi=tuple(leg_psi),
        edge_psi=tuple(edge_psi)
    )


# =============================================================================
# B^m: DEFINITION AND COEFFICIENT FORMULA
# =============================================================================

@lru_cache(maxsize=1024)
def b_class_definition(spec: BSpec) -> TautClass:
    """
    Σ over balanced complete admissible trees of (-1)^{deg(T)-1} e_*[T, d̄]

    Raises:
        ValueError: on an invalid spec
    """
    spec.validate()
    g, n, m, d = spec.g, spec.n, spec.m, spec.d

    items = []
    admissible = enum_admissible(g, n, m, d)
    for tree, q in admissible:
        view = rooted_view(tree, n)
        sign = (-1) ** (view.deg - 1)
        for p, coeff in _push_extra_legs(view, q):
            items.append((_contract_unstable(view, p), sign * coeff))

    result = TautClass.from_terms(g, n + m, items)
    logger.debug(f"🧮 B def {spec}: {len(admissible)} admissible trees → {len(result)} terms")
    return result


def c_lvl(tree: DecoratedTree, p: ExponentAssignment, m: int, n: Optional[int] = None) -> int:
    """Σ over p-admissible level functions of (-1)^{deg(l)-1}."""
    return sum((-1) ** (max(levels) - 1) for levels in enum_levels(tree, p, m, n))


def c_str(tree: DecoratedTree, p: ExponentAssignment, d: Sequence[int]) -> Fraction:
    """
    ∏_h (Σ_{I_h}(d_i+1) - Σ_{H_h}(p(h')+1))_{(p(h)+1)} / ∏(d_i+1)!

    Zero unless |E| + Σp = Σd, and zero when some I_h is empty.
    """
    view = rooted_view(tree, len(d))
    if len(tree.edges) + sum(p.get(h, 0) for h in view.halves) != sum(d):
        return Fraction(0)

    numerator = 1
    for h in view.halves:
        below = view.leg_sets[h]
        if not below:
            return Fraction(0)
        base = sum(d[i - 1] + 1 for i in below) - sum(p[x] + 1 for x in view.descendant_halves[h])
        numerator *= pochhammer(base, p[h] + 1)
        if not numerator:
            return Fraction(0)
    return Fraction(numerator, prod(factorial(x + 1) for x in d))


def _exponent_assignments(view: RootedView, d: Sequence[int]) -> Iterator[ExponentAssignment]:
    """p on H̃^{em}_+ with |E| + Σp = Σd and p(σ_i) <= d_i."""
    room = sum(d) - len(view.tree.edges)
    if room < 0:
        return
    caps = [d[idx - 1] if kind == 'leg' else None for kind, idx in view.halves]
    for values in weak_compositions(room, len(view.halves), caps):
        yield dict(zip(view.halves, values))


@lru_cache(maxsize=1024)
def b_class_fast(spec: BSpec) -> TautClass:
    """
    Σ_{T ∈ SRT_{g,n,m}} Σ_p C_lvl(T,p) C_str(T,p,d̄) [T, p]

    Raises:
        ValueError: on an invalid spec
    """
    spec.validate()
    g, n, m, d = spec.g, spec.n, spec.m, spec.d

    items = []
    for tree in enum_srt(g, n, m):
        view = rooted_view(tree, n)
        for p in _exponent_assignments(view, d):
            structural = c_str(tree, p, d)
            if not structural:
                continue
            decorated = view.decorate(p)
            if decorated.exceeds_dimension():
                continue
            levels = c_lvl(tree, p, m, n)
            if levels:
                items.append((decorated, levels * structural))

    result = TautClass.from_terms(g, n + m, items)
    logger.debug(f"🧮 B fast {spec}: {len(result)} terms")
    return result


# =============================================================================
# B̃^m
# =============================================================================

@lru_cache(maxsize=200000)
def _monomial_coefficient(factors: Tuple[Tuple[Tuple[int, ...], int], ...], target: Tuple[int, ...]) -> int:
    """Coefficient of ∏x_i^{target_i} in ∏ (x_{I})^{e} over the (I, e) factors."""
    if any(t < 0 for t in target):
        return 0
    if not factors:
        return 1 if not any(target) else 0
    if sum(e for _, e in factors) != sum(target):
        return 0

    xs = symbols(f'x1:{len(target) + 1}')
    expr = prod((sum(xs[i - 1] for i in legs) ** e for legs, e in factors), start=1)
    poly = Poly(expr, *xs)
    return int(poly.coeff_monomial(prod((x ** t for x, t in zip(xs, target)), start=1)))


@lru_cache(maxsize=1024)
def tilde_b_class(spec: BSpec) -> TautClass:
    """
    Coefficient of x_1^{d_1}...x_n^{d_n} in P_{g,n,m}

    Each (T, p) contributes (-1)^{|E|} [T, p] times the coefficient of
    ∏x_i^{d_i+1} in ∏_h x_{I_h}^{p(h)+1}, with x_∅ = 0.

    Raises:
        ValueError: on an invalid spec
    """
    spec.validate()
    g, n, m, d = spec.g, spec.n, spec.m, spec.d

    items = []
    for tree in enum_srt(g, n, m):
        view = rooted_view(tree, n)
        if any(not view.leg_sets[h] for h in view.halves):
            continue
        sign = (-1) ** len(tree.edges)
        edge_halves = [h for h in view.halves if h[0] == 'edge']

        for p in _exponent_assignments(view, d):
            target = tuple(d[i - 1] - p[('leg', i)] for i in range(1, n + 1))
            factors = tuple(sorted((view.leg_sets[h], p[h] + 1) for h in edge_halves))
            coeff = _monomial_coefficient(factors, target)
            if not coeff:
                continue
            decorated = view.decorate(p)
            if not decorated.exceeds_dimension():
                items.append((decorated, sign * coeff))

    return TautClass.from_terms(g, n + m, items)


def _edge_exponent_choices(view: RootedView, d: Sequence[int]) -> Iterator[ExponentAssignment]:
    """
    q on the mother-side halves, top-down, such that no vertex exceeds
    its dimension before the extra legs are forgotten
    """
    tree = view.tree
    order = view.preorder
    q: ExponentAssignment = {}

    def assign(idx):
        if idx == len(order):
            yield dict(q)
            return
        v = order[idx]
        extras = 0 if v == view.root else q[('edge', view.parent_edge[v])] + 1
        on_legs = sum(d[i - 1] for i in tree.legs_at(v) if i <= view.n)
        room = 3 * tree.genera[v] - 3 + tree.valence(v) + extras - on_legs
        if room < 0:
            return
        child_halves = [('edge', j) for j, _ in view.children[v]]
        for values in bounded_compositions(room, len(child_halves)):
            q.update(zip(child_halves, values))
            yield from assign(idx + 1)

    yield from assign(0)


@lru_cache(maxsize=1024)
def tilde_b_class_pushforward(spec: BSpec) -> TautClass:
    """
    Σ over nondegenerate balanced trees of (-1)^{|E|} e_*[T, d̄]

    Each stable tree T carries q(h)+1 extra legs below every edge; the
    extra legs are forgotten vertex by vertex with the string equation.

    Raises:
        ValueError: on an invalid spec
    """
    spec.validate()
    g, n, m, d = spec.g, spec.n, spec.m, spec.d

    items = []
    for tree in enum_srt(g, n, m):
        view = rooted_view(tree, n)
        sign = (-1) ** len(tree.edges)
        legs_q = {('leg', i): d[i - 1] for i in range(1, n + 1)}
        for edge_q in _edge_exponent_choices(view, d):
            q = dict(legs_q)
            q.update(edge_q)
            for p, coeff in _push_extra_legs(view, q):
                decorated = view.decorate(p)
                if not decorated.exceeds_dimension():
                    items.append((decorated, sign * coeff))

    return TautClass.from_terms(g, n + m, items)


def p_coefficients(g: int, n: int, m: int, total_degree: int) -> Dict[Tuple[int, ...], TautClass]:
    """Every coefficient of P_{g,n,m} of x-degree `total_degree`, keyed by d̄."""
    return {d: tilde_b_class(BSpec(g, n, m, d)) for d in weak_compositions(total_degree, n)}


def reduction_difference(g: int, m: int, d: Sequence[int], i: int) -> TautClass:
    """B̃_{d̄+e_i} - ψ_i B̃_{d̄}"""
    d = tuple(d)
    if not 1 <= i <= len(d):
        raise ValueError(f"❌ Leg {i} outside 1..{len(d)}")
    raised = d[:i - 1] + (d[i - 1] + 1,) + d[i:]
    n = len(d)
    return tilde_b_class(BSpec(g, n, m, raised)) - psi_multiply(tilde_b_class(BSpec(g, n, m, d)), i, 1)


# =============================================================================
# ONE-POINT CHAINS
# =============================================================================

def _chain_exponents(degrees: Sequence[int], toward_first_leg: bool):
    """
    Where the chain exponents go

    Returns:
        (exponent on the first vertex's leg, per-edge (left, right) exponents,
         exponent on the last vertex's leg)
    """
    k = len(degrees)
    if toward_first_leg:
        return degrees[0], [(0, degrees[i]) for i in range(1, k)], 0
    return 0, [(degrees[i], 0) for i in range(k - 1)], degrees[-1]


def gamma_class(g: int, m: int, d: int, k: int) -> TautClass:
    """
    Γ^{g,m}_{d|k} on M_{g,m+1}: leg 1 on the first vertex, legs 2..m+1 on
    the last, ψ^{d_i} on the half-edge of vertex i pointing toward leg 1
    """
    items = []
    for profile in enum_chains(g, d, m, k):
        first, edge_psi, _ = _chain_exponents(profile.degrees, toward_first_leg=True)
        groups: List[List[Tuple[int, int]]] = [[] for _ in range(k)]
        groups[0].append((1, first))
        groups[-1].extend((label, 0) for label in range(2, m + 2))
        items.append((chain_tree(profile.genera, groups, edge_psi), 1))
    return TautClass.from_terms(g, m + 1, items)


def gamma_chain(g: int, d: int, k: int) -> TautClass:
    """γ^g_{d|k} on M_{g,2}: ψ^{d_i} on the half-edge of vertex i pointing toward leg 2"""
    items = []
    for profile in enum_gamma_chains(g, d, k):
        _, edge_psi, last = _chain_exponents(profile.degrees, toward_first_leg=False)
        groups: List[List[Tuple[int, int]]] = [[] for _ in range(k)]
        groups[0].append((1, 0))
        groups[-1].append((2, last))
        items.append((chain_tree(profile.genera, groups, edge_psi), 1))
    return TautClass.from_terms(g, 2, items)


def gamma_tilde(g: int, m: int, d: int, k: int) -> TautClass:
    """γ̃^{g,m}_{d|k}: Γ^{g,m}_{d|k} for d <= 2g+m-2, zero above."""
    if d <= 2 * g + m - 2:
        return gamma_class(g, m, d, k)
    return TautClass.zero(g, m + 1)


def unfolded_b_class(g: int, m: int, d: int) -> TautClass:
    """
    ψ_1^{d-2g-m+1} Σ_k (-1)^{k+1} Γ^{g,m}_{2g+m-1|k}

    Raises:
        ValueError: for d < 2g+m-1
    """
    top = 2 * g + m - 1
    if d < top:
        raise ValueError(f"❌ Unfolding needs d >= {top}, got {d}")
    base = class_sum(g, m + 1, ((-1) ** (k + 1) * gamma_class(g, m, top, k) for k in range(1, g + 2)))
    return psi_multiply(base, 1, d - top)


# =============================================================================
# ψ-RELATIONS
# =============================================================================

def _two_vertex_chain(g1: int, g2: int, d1: int, d2: int, right_legs: int) -> DecoratedTree:
    """g1 (leg 1) -- g2 (legs 2..right_legs+1), ψ^{d1}, ψ^{d2} on the edge halves."""
    return chain_tree(
        (g1, g2),
        [[(1, 0)], [(label, 0) for label in range(2, right_legs + 2)]],
        [(d1, d2)]
    )


def lp_relation_class(variant: int, g: int, r: int, m: int = 1) -> TautClass:
    """
    Left side minus right side of a Liu–Pandharipande ψ-relation

    variant 1, on M_{g,2} (g >= 1):
        ψ_1^{2g+r} + (-1)^{2g+r+1} ψ_2^{2g+r}
        = Σ_{g1+g2=g, g_i>=1, d1+d2=2g+r-1} (-1)^{d1} [g1 -- g2]
    variant 2, on M_{g,m+1} (m >= 2):
        ψ_1^{2g+m-1+r} = Σ_{g1>=1, g2>=0, d1+d2=2g+m-2+r} (-1)^{d1} [g1 -- g2]

    Raises:
        ValueError: outside those ranges
    """
    if r < 0:
        raise ValueError(f"❌ r must be >= 0, got {r}")

    if variant == 1:
        if g < 1:
            raise ValueError(f"❌ The first relation needs g >= 1, got {g}")
        top = 2 * g + r
        items = [
            (DecoratedTree(genera=(g,), legs=(0, 0), leg_psi=(top, 0)), 1),
            (DecoratedTree(genera=(g,), legs=(0, 0), leg_psi=(0, top)), (-1) ** (top + 1)),
        ]
        for g1 in range(1, g):
            for d1, d2 in weak_compositions(top - 1, 2):
                items.append((_two_vertex_chain(g1, g - g1, d1, d2, 1), -(-1) ** d1))
        return TautClass.from_terms(g, 2, items)

    if variant == 2:
        if m < 2:
            raise ValueError(f"❌ The second relation needs m >= 2, got {m}")
        if g < 0:
            raise ValueError(f"❌ Negative genus {g}")
        top = 2 * g + m - 1 + r
        items = [(DecoratedTree(genera=(g,), legs=(0,) * (m + 1), leg_psi=(top,) + (0,) * m), 1)]
        for g1 in range(1, g + 1):
            for d1, d2 in weak_compositions(top - 1, 2):
                items.append((_two_vertex_chain(g1, g - g1, d1, d2, m), -(-1) ** d1))
        return TautClass.from_terms(g, m + 1, items)

    raise ValueError(f"❌ Unknown relation variant {variant}")


def _two_sided_vertex(g: int, d: int) -> TautClass:
    """[g; ψ^d on leg 1] + (-1)^{d+1} [g; ψ^d on leg 2] on M_{g,2}"""
    return single_vertex_class(g, (d, 0)) + (-1) ** (d + 1) * single_vertex_class(g, (0, d))


def one_point_inductive_difference(g: int, m: int, ell: int) -> TautClass:
    """
    Left side minus right side of the inductive chain identity on M_{g,m+1}

    Σ_{k=1}^{ℓ+1} (-1)^{k+1} Γ^{g,m}_{2g+m-1|k} against the three sums
    built from γ, γ̃ and single-vertex factors glued with ⋄.

    Raises:
        ValueError: for m < 2 or ℓ < 1
    """
    if m < 2 or ell < 1 or g < 0:
        raise ValueError(f"❌ Need g >= 0, m >= 2, ℓ >= 1, got g={g}, m={m}, ℓ={ell}")

    n = m + 1
    top = 2 * g + m - 1
    parts = [(-1) ** (k + 1) * gamma_class(g, m, top, k) for k in range(1, ell + 2)]

    for g1 in range(1, g + 1):
        g2 = g - g1
        for d1, d2 in weak_compositions(top - 1, 2):
            right = single_vertex_class(g2, (d2,) + (0,) * m)
            first = diamond(gamma_chain(g1, d1, ell), right)
            parts.append(-(-1) ** (d1 + ell - 1) * first)

            second = diamond(_two_sided_vertex(g1, d1), gamma_tilde(g2, m, d2, ell))
            parts.append(-(-1) ** ell * second)

    for g1 in range(1, g + 1):
        for g2 in range(1, g - g1 + 1):
            g3 = g - g1 - g2
            for d1, d2, d3 in weak_compositions(top - 2, 3):
                middle = _two_sided_vertex(g2, d2)
                for k1 in range(1, ell):
                    left = diamond(gamma_chain(g1, d1, k1), middle)
                    third = diamond(left, gamma_tilde(g3, m, d3, ell - k1))
                    parts.append(-(-1) ** (d1 + ell - 1) * third)

    return class_sum(g, n, parts)
