"""
File: core/graph_core.py
Location: tautcheck/core/graph_core.py
Purpose: Decorated stable trees, canonical forms and exact class algebra
Dependencies: fractions (exact coefficients), json (class serialization)

Everything here is immutable after construction; operations return new
objects and can be shared freely between threads and worker processes.
"""

import json
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from utils.helpers import format_fraction, parse_fraction

logger = logging.getLogger(__name__)

CanonicalCode = bytes

# (edge index, side of this vertex, vertex on the other side)
Incidence = Tuple[int, int, int]


@dataclass(frozen=True)
class DecoratedTree:
    """
    Genus-decorated, leg-labelled tree with ψ-exponents on half-edges

    Vertices are 0..len(genera)-1. Leg i (labels start at 1) sits on
    vertex legs[i-1] and carries ψ^leg_psi[i-1]. Edge j joins
    edges[j][0] and edges[j][1]; edge_psi[j] lists the exponents of its two
    half-edges in the same order. `root` is set for rooted trees only.
    """
    genera: Tuple[int, ...]
    legs: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...] = ()
    leg_psi: Tuple[int, ...] = ()
    edge_psi: Tuple[Tuple[int, int], ...] = ()
    root: Optional[int] = None

    def __post_init__(self):
        if not self.leg_psi and self.legs:
            object.__setattr__(self, 'leg_psi', (0,) * len(self.legs))
        if not self.edge_psi and self.edges:
            object.__setattr__(self, 'edge_psi', ((0, 0),) * len(self.edges))

    # ------------------------------------------------------------------
    # Basic invariants
    # ------------------------------------------------------------------

    @property
    def genus(self) -> int:
        return sum(self.genera)

    @property
    def n_legs(self) -> int:
        return len(self.legs)

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def degree(self) -> int:
        """|E| + total ψ-degree: the cohomological degree of ξ_T*(ψ-monomial)."""
        return len(self.edges) + sum(self.leg_psi) + sum(a + b for a, b in self.edge_psi)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[Incidence, ...], ...]:
        adj: List[List[Incidence]] = [[] for _ in self.genera]
        for j, (a, b) in enumerate(self.edges):
            if 0 <= a < len(adj) and 0 <= b < len(adj):
                adj[a].append((j, 0, b))
                adj[b].append((j, 1, a))
        return tuple(tuple(x) for x in adj)

    @cached_property
    def legs_by_vertex(self) -> Tuple[Tuple[int, ...], ...]:
        grouped: List[List[int]] = [[] for _ in self.genera]
        for label, v in enumerate(self.legs, start=1):
            if 0 <= v < len(grouped):
                grouped[v].append(label)
        return tuple(tuple(x) for x in grouped)

    def legs_at(self, v: int) -> Tuple[int, ...]:
        return self.legs_by_vertex[v]

    def valence(self, v: int) -> int:
        return len(self.legs_by_vertex[v]) + len(self.adjacency[v])

    def psi_sum(self, v: int) -> int:
        total = sum(self.leg_psi[i - 1] for i in self.legs_by_vertex[v])
        total += sum(self.edge_psi[j][side] for j, side, _ in self.adjacency[v])
        return total

    def vertex_dimension(self, v: int) -> int:
        return 3 * self.genera[v] - 3 + self.valence(v)

    def exceeds_dimension(self) -> bool:
        """True when some vertex carries more ψ-degree than its moduli space allows."""
        return any(self.psi_sum(v) > self.vertex_dimension(v) for v in range(self.n_vertices))

    def is_psi_free(self) -> bool:
        return not any(self.leg_psi) and not any(a or b for a, b in self.edge_psi)

    def unrooted(self) -> 'DecoratedTree':
        return self if self.root is None else replace(self, root=None)


# =============================================================================
# VALIDATION
# =============================================================================

def validate(tree: DecoratedTree) -> List[str]:
    """
    Check every DecoratedTree invariant

    Returns:
        list: violation descriptions; empty iff the tree is a valid stable tree
    """
    problems = []
    nv = tree.n_vertices

    if nv == 0:
        return ["tree has no vertices"]

    for v, g in enumerate(tree.genera):
        if g < 0:
            problems.append(f"vertex {v} has negative genus {g}")

    for label, v in enumerate(tree.legs, start=1):
        if not 0 <= v < nv:
            problems.append(f"leg {label} attached to missing vertex {v}")

    if len(tree.leg_psi) != tree.n_legs:
        problems.append("leg exponent count does not match leg count")
    elif any(p < 0 for p in tree.leg_psi):
        bad = [i for i, p in enumerate(tree.leg_psi, start=1) if p < 0]
        problems.append(f"negative ψ-exponent on legs {bad}")

    if len(tree.edge_psi) != len(tree.edges):
        problems.append("edge exponent count does not match edge count")
    elif any(a < 0 or b < 0 for a, b in tree.edge_psi):
        problems.append("negative ψ-exponent on an edge half-edge")

    for j, (a, b) in enumerate(tree.edges):
        if not (0 <= a < nv and 0 <= b < nv):
            problems.append(f"edge {j} references a missing vertex")
        elif a == b:
            problems.append(f"edge {j} is a loop at vertex {a}")

    if tree.root is not None and not 0 <= tree.root < nv:
        problems.append(f"root {tree.root} is not a vertex")

    if problems:
        return problems

    if len(tree.edges) != nv - 1:
        problems.append(f"graph has {len(tree.edges)} edges for {nv} vertices (not a tree)")
    else:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for _, _, u in tree.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != nv:
            problems.append("graph is disconnected")

    for v in range(nv):
        if 2 * tree.genera[v] - 2 + tree.valence(v) <= 0:
            problems.append(f"vertex {v} unstable")

    return problems


# =============================================================================
# CANONICAL FORM
# =============================================================================

def _encode(tree: DecoratedTree, v: int, parent_edge: int) -> tuple:
    legs = tuple(sorted((label, tree.leg_psi[label - 1]) for label in tree.legs_at(v)))
    children = []
    for j, side, u in tree.adjacency[v]:
        if j == parent_edge:
            continue
        here = tree.edge_psi[j][side]
        there = tree.edge_psi[j][1 - side]
        children.append((here, there, _encode(tree, u, j)))
    return (tree.genera[v], legs, tuple(sorted(children)))


def _root_code(tree: DecoratedTree) -> tuple:
    if tree.root is not None:
        return _encode(tree, tree.root, -1)
    if tree.legs:
        return _encode(tree, tree.legs[0], -1)
    # leg-free trees: take the smallest encoding over all possible roots
    return min(_encode(tree, v, -1) for v in range(tree.n_vertices))


def _rebuild(code: tuple, n_legs: int, rooted: bool) -> DecoratedTree:
    genera: List[int] = []
    legs = [0] * n_legs
    leg_psi = [0] * n_legs
    edges: List[Tuple[int, int]] = []
    edge_psi: List[Tuple[int, int]] = []

    def visit(node):
        v = len(genera)
        g, leg_items, children = node
        genera.append(g)
        for label, psi in leg_items:
            legs[label - 1] = v
            leg_psi[label - 1] = psi
        for here, there, child in children:
            edges.append((v, len(genera)))
            edge_psi.append((here, there))
            visit(child)

    visit(code)
    return DecoratedTree(
        genera=tuple(genera),
        legs=tuple(legs),
        edges=tuple(edges),
        leg_psi=tuple(leg_psi),
        edge_psi=tuple(edge_psi),
        root=0 if rooted else None
    )


@lru_cache(maxsize=500000)
def canonical_form(tree: DecoratedTree) -> DecoratedTree:
    """Preorder rebuild of the canonical encoding; isomorphic trees map to equal objects."""
    return _rebuild(_root_code(tree), tree.n_legs, tree.root is not None)


def canonical_code(tree: DecoratedTree) -> CanonicalCode:
    """Byte encoding of the isomorphism class, without validation."""
    prefix = b'R:' if tree.root is not None else b'U:'
    return prefix + repr(_root_code(tree)).encode('ascii')


def canonicalize(tree: DecoratedTree) -> CanonicalCode:
    """
    Canonical byte code of a valid tree

    Unrooted trees are rooted at the vertex carrying leg 1; each subtree is
    encoded as (genus, sorted legs with exponents, sorted children paired
    with the exponents of the connecting half-edges).

    Raises:
        ValueError: if the tree violates a DecoratedTree invariant
    """
    problems = validate(tree)
    if problems:
        raise ValueError(f"❌ Cannot canonicalize invalid tree: {'; '.join(problems)}")
    return canonical_code(tree)


# =============================================================================
# CLASSES
# =============================================================================

class TautClass:
    """
    Exact rational combination of canonical decorated trees on M_{g,n}

    Features:
    - Terms keyed by canonical unrooted trees, zero coefficients never stored
    - Terms killed by per-vertex dimension are dropped on construction
    - Vector-space operators (+, -, scalar *)
    - Deterministic iteration order (by canonical code)
    """

    __slots__ = ('genus', 'n', '_terms', '_hash')

    def __init__(self, genus: int, n: int, terms: Optional[Dict[DecoratedTree, Fraction]] = None):
        self.genus = genus
        self.n = n
        self._terms = dict(terms) if terms else {}
        self._hash = None

    @classmethod
    def zero(cls, genus: int, n: int) -> 'TautClass':
        return cls(genus, n)

    @classmethod
    def from_terms(cls, genus: int, n: int,
                   items: Iterable[Tuple[DecoratedTree, object]]) -> 'TautClass':
        """
        Build a class from (tree, coefficient) pairs

        Trees are canonicalized and merged; trees whose vertices exceed their
        dimension and zero coefficients are dropped.

        Raises:
            ValueError: on a tree from a different ambient space
        """
        terms: Dict[DecoratedTree, Fraction] = {}
        for tree, coeff in items:
            if tree.genus != genus or tree.n_legs != n:
                raise ValueError(
                    f"❌ Ambient mismatch: tree on M_{{{tree.genus},{tree.n_legs}}}, class on M_{{{genus},{n}}}"
                )
            coeff = Fraction(coeff)
            if coeff == 0 or tree.exceeds_dimension():
                continue
            key = canonical_form(tree.unrooted())
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return cls(genus, n, {t: c for t, c in terms.items() if c != 0})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def ambient(self) -> Tuple[int, int]:
        return (self.genus, self.n)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterator[Tuple[DecoratedTree, Fraction]]:
        """Terms in canonical-code order."""
        for tree in sorted(self._terms, key=canonical_code):
            yield tree, self._terms[tree]

    def coefficient(self, tree: DecoratedTree) -> Fraction:
        return self._terms.get(canonical_form(tree.unrooted()), Fraction(0))

    def degrees(self) -> List[int]:
        return sorted({t.degree for t in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Degree of a homogeneous nonzero class, None otherwise."""
        degrees = self.degrees()
        return degrees[0] if len(degrees) == 1 else None

    def _check_ambient(self, other: 'TautClass'):
        if self.ambient != other.ambient:
            raise ValueError(
                f"❌ Ambient mismatch: M_{{{self.genus},{self.n}}} vs M_{{{other.genus},{other.n}}}"
            )

    def __add__(self, other: 'TautClass') -> 'TautClass':
        if not isinstance(other, TautClass):
            return NotImplemented
        self._check_ambient(other)
        terms = dict(self._terms)
        for tree, coeff in other._terms.items():
            value = terms.get(tree, Fraction(0)) + coeff
            if value:
                terms[tree] = value
            else:
                terms.pop(tree, None)
        return TautClass(self.genus, self.n, terms)

    def __neg__(self) -> 'TautClass':
        return TautClass(self.genus, self.n, {t: -c for t, c in self._terms.items()})

    def __sub__(self, other: 'TautClass') -> 'TautClass':
        if not isinstance(other, TautClass):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> 'TautClass':
        if isinstance(scalar, TautClass):
            return NotImplemented
        scalar = Fraction(scalar)
        if scalar == 0:
            return TautClass.zero(self.genus, self.n)
        return TautClass(self.genus, self.n, {t: c * scalar for t, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TautClass):
            return NotImplemented
        return self.ambient == other.ambient and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.genus, self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"TautClass(g={self.genus}, n={self.n}, terms={len(self._terms)})"


def class_add(c1: TautClass, c2: TautClass) -> TautClass:
    return c1 + c2


def class_sub(c1: TautClass, c2: TautClass) -> TautClass:
    return c1 - c2


def class_scale(c: TautClass, scalar) -> TautClass:
    return c * scalar


def class_sum(genus: int, n: int, classes: Iterable[TautClass]) -> TautClass:
    """Sum of many classes, accumulated in one dictionary."""
    terms: Dict[DecoratedTree, Fraction] = {}
    for c in classes:
        if c.ambient != (genus, n):
            raise ValueError(f"❌ Ambient mismatch: M_{{{c.genus},{c.n}}} in a sum on M_{{{genus},{n}}}")
        for tree, coeff in c._terms.items():
            terms[tree] = terms.get(tree, Fraction(0)) + coeff
    return TautClass(genus, n, {t: c for t, c in terms.items() if c != 0})


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def single_vertex_tree(genus: int, psi: Sequence[int]) -> DecoratedTree:
    return DecoratedTree(genera=(genus,), legs=(0,) * len(psi), leg_psi=tuple(psi))


def single_vertex_class(genus: int, psi: Sequence[int]) -> TautClass:
    """ψ-monomial ∏ψ_i^{psi[i-1]} on M_{g,n} (zero above the dimension)."""
    return TautClass.from_terms(genus, len(psi), [(single_vertex_tree(genus, psi), 1)])


def chain_tree(genera: Sequence[int],
               leg_groups: Sequence[Sequence[Tuple[int, int]]],
               edge_psi: Sequence[Tuple[int, int]]) -> DecoratedTree:
    """
    Chain v_0 - v_1 - ... - v_{k-1}

    Args:
        genera: vertex genera along the chain
        leg_groups: per vertex, (label, ψ-exponent) pairs of its legs
        edge_psi: per edge (v_i, v_{i+1}), the exponents on (v_i side, v_{i+1} side)
    """
    n_legs = sum(len(group) for group in leg_groups)
    legs = [0] * n_legs
    leg_psi = [0] * n_legs
    for v, group in enumerate(leg_groups):
        for label, psi in group:
            legs[label - 1] = v
            leg_psi[label - 1] = psi
    return DecoratedTree(
        genera=tuple(genera),
        legs=tuple(legs),
        edges=tuple((i, i + 1) for i in range(len(genera) - 1)),
        leg_psi=tuple(leg_psi),
        edge_psi=tuple(tuple(x) for x in edge_psi)
    )


# =============================================================================
# GEOMETRIC OPERATIONS
# =============================================================================

def psi_multiply(c: TautClass, leg: int, power: int) -> TautClass:
    """Multiply every term by ψ_leg^power (added to the exponent on that leg)."""
    if not 1 <= leg <= c.n:
        raise ValueError(f"❌ Unknown leg {leg} on M_{{{c.genus},{c.n}}}")
    if power < 0:
        raise ValueError(f"❌ Negative ψ power {power}")
    if power == 0:
        return c

    items = []
    for tree, coeff in c.items():
        leg_psi = list(tree.leg_psi)
        leg_psi[leg - 1] += power
        items.append((replace(tree, leg_psi=tuple(leg_psi)), coeff))
    return TautClass.from_terms(c.genus, c.n, items)


def relabel(c: TautClass, permutation: Sequence[int]) -> TautClass:
    """
    Rename leg i to permutation[i-1]

    Raises:
        ValueError: if permutation is not a bijection of {1..n}
    """
    perm = tuple(permutation)
    if sorted(perm) != list(range(1, c.n + 1)):
        raise ValueError(f"❌ Not a permutation of 1..{c.n}: {perm}")

    items = []
    for tree, coeff in c.items():
        legs = [0] * c.n
        leg_psi = [0] * c.n
        for old, new in enumerate(perm, start=1):
            legs[new - 1] = tree.legs[old - 1]
            leg_psi[new - 1] = tree.leg_psi[old - 1]
        items.append((replace(tree, legs=tuple(legs), leg_psi=tuple(leg_psi)), coeff))
    return TautClass.from_terms(c.genus, c.n, items)


def _glue_trees(t1: DecoratedTree, t2: DecoratedTree) -> DecoratedTree:
    offset = t1.n_vertices
    a = t1.legs[1]
    b = t2.legs[0] + offset
    return DecoratedTree(
        genera=t1.genera + t2.genera,
        legs=(t1.legs[0],) + tuple(v + offset for v in t2.legs[1:]),
        edges=t1.edges + tuple((x + offset, y + offset) for x, y in t2.edges) + ((a, b),),
        leg_psi=(t1.leg_psi[0],) + t2.leg_psi[1:],
        edge_psi=t1.edge_psi + t2.edge_psi + ((t1.leg_psi[1], t2.leg_psi[0]),)
    )


def diamond(c1: TautClass, c2: TautClass) -> TautClass:
    """
    Concatenation: glue leg 2 of c1 (on M_{g1,2}) to leg 1 of c2 (on M_{g2,m+1})

    Leg 1 of the result is leg 1 of c1; legs 2..m+1 are those of c2. The
    exponents of the glued legs move to the half-edges of the new edge.
    """
    if c1.n != 2:
        raise ValueError(f"❌ Left factor must live on M_{{g,2}}, got M_{{{c1.genus},{c1.n}}}")
    if c2.n < 1:
        raise ValueError("❌ Right factor needs at least one leg")

    items = []
    for t1, k1 in c1.items():
        for t2, k2 in c2.items():
            items.append((_glue_trees(t1, t2), k1 * k2))
    return TautClass.from_terms(c1.genus + c2.genus, c2.n, items)


def _with_new_leg(tree: DecoratedTree, new_label: int, vertex: int,
                  genera=None, edges=None, edge_psi=None,
                  leg_overrides: Optional[Dict[int, Tuple[int, int]]] = None) -> DecoratedTree:
    n = tree.n_legs
    legs = [0] * (n + 1)
    leg_psi = [0] * (n + 1)
    for old in range(1, n + 1):
        new = old if old < new_label else old + 1
        v, p = tree.legs[old - 1], tree.leg_psi[old - 1]
        if leg_overrides and old in leg_overrides:
            v, p = leg_overrides[old]
        legs[new - 1] = v
        leg_psi[new - 1] = p
    legs[new_label - 1] = vertex
    return DecoratedTree(
        genera=tree.genera if genera is None else genera,
        legs=tuple(legs),
        edges=tree.edges if edges is None else edges,
        leg_psi=tuple(leg_psi),
        edge_psi=tree.edge_psi if edge_psi is None else edge_psi
    )


def forgetful_pullback(c: TautClass, new_label: Optional[int] = None) -> TautClass:
    """
    Pull back along the map forgetting leg `new_label` (default n+1)

    π*ξ_T*(∏ψ^p) = Σ_v [T with the new leg at v] − Σ_{f: p(f)>=1} [T_f],
    where T_f bubbles the new leg together with f off its vertex on a new
    genus-0 vertex and lowers p(f) by one. Old labels >= new_label shift up.
    """
    label = c.n + 1 if new_label is None else new_label
    if not 1 <= label <= c.n + 1:
        raise ValueError(f"❌ New leg label {label} outside 1..{c.n + 1}")

    items = []
    for tree, coeff in c.items():
        for v in range(tree.n_vertices):
            items.append((_with_new_leg(tree, label, v), coeff))

        w = tree.n_vertices
        genera = tree.genera + (0,)

        for leg, p in enumerate(tree.leg_psi, start=1):
            if p < 1:
                continue
            u = tree.legs[leg - 1]
            bubbled = _with_new_leg(
                tree, label, w,
                genera=genera,
                edges=tree.edges + ((u, w),),
                edge_psi=tree.edge_psi + ((p - 1, 0),),
                leg_overrides={leg: (w, 0)}
            )
            items.append((bubbled, -coeff))

        for j, (a, b) in enumerate(tree.edges):
            for side in (0, 1):
                p = tree.edge_psi[j][side]
                if p < 1:
                    continue
                u, x = (a, b) if side == 0 else (b, a)
                far = tree.edge_psi[j][1 - side]
                edges = list(tree.edges)
                edge_psi = list(tree.edge_psi)
                edges[j] = (u, w)
                edge_psi[j] = (p - 1, 0)
                edges.append((w, x))
                edge_psi.append((0, far))
                bubbled = _with_new_leg(tree, label, w, genera=genera,
                                        edges=tuple(edges), edge_psi=tuple(edge_psi))
                items.append((bubbled, -coeff))

    return TautClass.from_terms(c.genus, c.n + 1, items)


def _contract_forgotten_leg(tree: DecoratedTree, leg: int) -> Optional[DecoratedTree]:
    v = tree.legs[leg - 1]
    if tree.genera[v] != 0 or tree.valence(v) != 3:
        return None

    other_legs = [i for i in tree.legs_at(v) if i != leg]
    incident = tree.adjacency[v]

    edges = [e for j, e in enumerate(tree.edges) if j not in {x[0] for x in incident}]
    leg_vertex = {i: tree.legs[i - 1] for i in range(1, tree.n_legs + 1) if i != leg}

    if len(incident) == 2:
        (_, _, u1), (_, _, u2) = incident
        edges.append((u1, u2))
    elif len(incident) == 1 and len(other_legs) == 1:
        (_, _, u), = incident
        leg_vertex[other_legs[0]] = u
    else:
        return None

    remap = {old: new for new, old in enumerate(x for x in range(tree.n_vertices) if x != v)}
    return DecoratedTree(
        genera=tuple(g for x, g in enumerate(tree.genera) if x != v),
        legs=tuple(remap[leg_vertex[i]] for i in sorted(leg_vertex)),
        edges=tuple((remap[a], remap[b]) for a, b in edges)
    )


def forgetful_pushforward_nopsi(c: TautClass, forgotten_leg: int) -> TautClass:
    """
    Push forward a ψ-free class along the map forgetting one leg

    A term survives only if the forgotten leg sits on a genus-0 vertex of
    valence 3; that vertex is then contracted. Labels above the forgotten
    one shift down by one.

    Raises:
        ValueError: on ψ-decorated terms or an unstable target space
    """
    if not 1 <= forgotten_leg <= c.n:
        raise ValueError(f"❌ Unknown leg {forgotten_leg} on M_{{{c.genus},{c.n}}}")
    if 2 * c.genus - 2 + c.n - 1 <= 0:
        raise ValueError(f"❌ Target M_{{{c.genus},{c.n - 1}}} is unstable")

    items = []
    for tree, coeff in c.items():
        if not tree.is_psi_free():
            raise ValueError("❌ forgetful_pushforward_nopsi got a ψ-decorated term")
        contracted = _contract_forgotten_leg(tree, forgotten_leg)
        if contracted is not None:
            items.append((contracted, coeff))
    return TautClass.from_terms(c.genus, c.n - 1, items)


# =============================================================================
# JSON
# =============================================================================

def tree_to_json(tree: DecoratedTree) -> dict:
    """
    Half-edge ids: legs are 1..N; edge j has half-edges N+2j+1 and N+2j+2.
    """
    n = tree.n_legs
    half_edges = []
    psi = [{"half_edge_or_leg": i, "exp": p} for i, p in enumerate(tree.leg_psi, start=1) if p]
    for j, (a, b) in enumerate(tree.edges):
        half_edges.append({"id": n + 2 * j + 1, "vertex": a})
        half_edges.append({"id": n + 2 * j + 2, "vertex": b})
        pa, pb = tree.edge_psi[j]
        if pa:
            psi.append({"half_edge_or_leg": n + 2 * j + 1, "exp": pa})
        if pb:
            psi.append({"half_edge_or_leg": n + 2 * j + 2, "exp": pb})

    data = {
        "vertices": [{"id": v, "g": g} for v, g in enumerate(tree.genera)],
        "edges": [[n + 2 * j + 1, n + 2 * j + 2] for j in range(len(tree.edges))],
        "legs": [{"label": i, "vertex": v} for i, v in enumerate(tree.legs, start=1)],
        "psi": psi,
        "half_edges": half_edges
    }
    if tree.root is not None:
        data["root"] = tree.root
    return data


def tree_from_json(data: dict) -> DecoratedTree:
    vertex_ids = [item["id"] for item in data["vertices"]]
    index = {vid: i for i, vid in enumerate(vertex_ids)}
    genera = tuple(int(item["g"]) for item in data["vertices"])

    leg_items = sorted(data["legs"], key=lambda item: item["label"])
    labels = [item["label"] for item in leg_items]
    if labels != list(range(1, len(labels) + 1)):
        raise ValueError(f"❌ Leg labels must be exactly 1..N, got {labels}")
    legs = tuple(index[item["vertex"]] for item in leg_items)
    n = len(legs)

    owner = {item["id"]: index[item["vertex"]] for item in data.get("half_edges", [])}
    exps = {item["half_edge_or_leg"]: int(item["exp"]) for item in data.get("psi", [])}

    edges = []
    edge_psi = []
    for h1, h2 in data["edges"]:
        if h1 not in owner or h2 not in owner:
            raise ValueError(f"❌ Edge [{h1},{h2}] has a half-edge with no vertex")
        edges.append((owner[h1], owner[h2]))
        edge_psi.append((exps.get(h1, 0), exps.get(h2, 0)))

    root = data.get("root")
    return DecoratedTree(
        genera=genera,
        legs=legs,
        edges=tuple(edges),
        leg_psi=tuple(exps.get(i, 0) for i in range(1, n + 1)),
        edge_psi=tuple(edge_psi),
        root=index[root] if root is not None else None
    )


def to_json(c: TautClass) -> dict:
    return {
        "ambient": {"g": c.genus, "n": c.n},
        "terms": [{"coeff": format_fraction(coeff), "tree": tree_to_json(tree)}
                  for tree, coeff in c.items()]
    }


def from_json(data: dict) -> TautClass:
    genus = int(data["ambient"]["g"])
    n = int(data["ambient"]["n"])
    items = []
    for term in data["terms"]:
        tree = tree_from_json(term["tree"])
        problems = validate(tree)
        if problems:
            raise ValueError(f"❌ Invalid tree in JSON: {'; '.join(problems)}")
        items.append((tree, parse_fraction(term["coeff"])))
    return TautClass.from_terms(genus, n, items)


def dumps(c: TautClass) -> str:
    return json.dumps(to_json(c), separators=(',', ':'), ensure_ascii=False)


def loads(text: str) -> TautClass:
    return from_json(json.loads(text))
