"""
File: core/tree_enum.py
Location: tautcheck/core/tree_enum.py
Purpose: Enumerators for the finite families of rooted trees the class formulas sum over

Trees are produced as rooted DecoratedTrees with vertex 0 as the root and
edges oriented (mother, child). Regular legs are 1..n, frozen legs
n+1..n+m sit on the root. Extra (forgettable) legs are never
materialized: an exponent q(h) on a mother-side half-edge stands for
q(h)+1 extra legs on the child.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from core.graph_core import DecoratedTree, canonical_code, validate
from utils.helpers import bounded_compositions, subsets, weak_compositions

logger = logging.getLogger(__name__)

# ('leg', i) for a regular leg, ('edge', j) for the mother-side half of edge j
HalfKey = Tuple[str, int]
ExponentAssignment = Dict[HalfKey, int]
LevelFunction = Tuple[int, ...]


# =============================================================================
# ROOTED VIEW
# =============================================================================

class RootedView:
    """
    Mother/daughter structure of a rooted tree with n regular legs

    Features:
    - parent / children / canonical levels l_T and deg(T)
    - H̃^{em}_+ keys, the vertex each one is attached to
    - I_h (regular legs below h) and H_h (H̃ half-edges below h)
    - [T, p] as an unrooted DecoratedTree
    """

    def __init__(self, tree: DecoratedTree, n: int):
        if tree.root is None:
            raise ValueError("❌ RootedView needs a rooted tree")
        self.tree = tree
        self.n = n
        self.root = tree.root

        nv = tree.n_vertices
        self.parent: List[Optional[int]] = [None] * nv
        self.parent_edge: List[Optional[int]] = [None] * nv
        self.children: List[List[Tuple[int, int]]] = [[] for _ in range(nv)]
        self.level: List[int] = [0] * nv
        self.mother_of_edge: Dict[int, int] = {}
        self.child_of_edge: Dict[int, int] = {}

        order = [self.root]
        self.level[self.root] = 1
        for v in order:
            for j, _, u in tree.adjacency[v]:
                if j == self.parent_edge[v]:
                    continue
                self.parent[u] = v
                self.parent_edge[u] = j
                self.children[v].append((j, u))
                self.level[u] = self.level[v] + 1
                self.mother_of_edge[j] = v
                self.child_of_edge[j] = u
                order.append(u)
        self.preorder = order

    @property
    def deg(self) -> int:
        return max(self.level)

    @cached_property
    def halves(self) -> Tuple[HalfKey, ...]:
        """H̃^{em}_+: regular legs, then mother-side edge halves."""
        return tuple([('leg', i) for i in range(1, self.n + 1)] +
                     [('edge', j) for j in range(len(self.tree.edges))])

    def half_vertex(self, key: HalfKey) -> int:
        kind, idx = key
        return self.tree.legs[idx - 1] if kind == 'leg' else self.mother_of_edge[idx]

    @cached_property
    def outgoing(self) -> Tuple[Tuple[HalfKey, ...], ...]:
        grouped: List[List[HalfKey]] = [[] for _ in self.tree.genera]
        for key in self.halves:
            grouped[self.half_vertex(key)].append(key)
        return tuple(tuple(x) for x in grouped)

    @cached_property
    def subtree(self) -> Tuple[frozenset, ...]:
        """Desc[v], including v itself."""
        below = [set([v]) for v in range(self.tree.n_vertices)]
        for v in reversed(self.preorder):
            p = self.parent[v]
            if p is not None:
                below[p] |= below[v]
        return tuple(frozenset(x) for x in below)

    @cached_property
    def leg_sets(self) -> Dict[HalfKey, Tuple[int, ...]]:
        """I_h for every h in H̃^{em}_+."""
        result = {}
        for key in self.halves:
            kind, idx = key
            if kind == 'leg':
                result[key] = (idx,)
            else:
                below = self.subtree[self.child_of_edge[idx]]
                result[key] = tuple(i for i in range(1, self.n + 1) if self.tree.legs[i - 1] in below)
        return result

    @cached_property
    def descendant_halves(self) -> Dict[HalfKey, Tuple[HalfKey, ...]]:
        """H_h: the H̃^{em}_+ half-edges strictly below h."""
        result = {}
        for key in self.halves:
            kind, idx = key
            if kind == 'leg':
                result[key] = ()
            else:
                below = self.subtree[self.child_of_edge[idx]]
                result[key] = tuple(h for h in self.halves if self.half_vertex(h) in below)
        return result

    def is_potentially_unstable(self, v: int) -> bool:
        """Non-root genus-0 vertex that is unstable once its extra legs are forgotten."""
        if v == self.root:
            return False
        return 2 * self.tree.genera[v] - 2 + self.tree.valence(v) <= 0

    def cumulative_genus(self, levels: Sequence[int], upto: int) -> int:
        return sum(g for v, g in enumerate(self.tree.genera) if levels[v] <= upto)

    def decorate(self, p: ExponentAssignment) -> DecoratedTree:
        """[T, p]: ψ^{p(h)} on every H̃^{em}_+ half-edge, 0 elsewhere; root dropped."""
        tree = self.tree
        leg_psi = tuple(p.get(('leg', i), 0) if i <= self.n else 0
                        for i in range(1, tree.n_legs + 1))
        edge_psi = []
        for j, (a, b) in enumerate(tree.edges):
            value = p.get(('edge', j), 0)
            edge_psi.append((value, 0) if self.mother_of_edge[j] == a else (0, value))
        return DecoratedTree(
            genera=tree.genera,
            legs=tree.legs,
            edges=tree.edges,
            leg_psi=leg_psi,
            edge_psi=tuple(edge_psi)
        )


@lru_cache(maxsize=100000)
def rooted_view(tree: DecoratedTree, n: int) -> RootedView:
    return RootedView(tree, n)


# =============================================================================
# STABLE ROOTED TREES
# =============================================================================

# A node is (genus, sorted leg labels, sorted child nodes); sorting makes it canonical.
Node = Tuple[int, Tuple[int, ...], tuple]


def _materialize(node: Node, n_legs: int) -> DecoratedTree:
    genera: List[int] = []
    legs = [0] * n_legs
    edges: List[Tuple[int, int]] = []

    def visit(current):
        v = len(genera)
        g, leg_labels, children = current
        genera.append(g)
        for label in leg_labels:
            legs[label - 1] = v
        for child in children:
            edges.append((v, len(genera)))
            visit(child)

    visit(node)
    return DecoratedTree(genera=tuple(genera), legs=tuple(legs), edges=tuple(edges), root=0)


@lru_cache(maxsize=None)
def _branches(genus: int, legs: Tuple[int, ...]) -> Tuple[Node, ...]:
    """Stable subtrees hanging from one edge (the edge counts towards the top vertex)."""
    results = set()
    for g0 in range(genus + 1):
        for own in subsets(legs):
            rest = tuple(x for x in legs if x not in own)
            # top vertex: 2g0 - 2 + |own| + 1 + #children > 0
            min_children = max(0, 2 - 2 * g0 - len(own))
            for forest in _forests(genus - g0, rest, min_children):
                results.add((g0, tuple(own), forest))
    return tuple(sorted(results))


@lru_cache(maxsize=None)
def _forests(genus: int, legs: Tuple[int, ...], min_parts: int) -> Tuple[tuple, ...]:
    """Multisets of branches partitioning (genus, legs), at least min_parts of them."""
    if genus == 0 and not legs:
        return ((),) if min_parts <= 0 else ()

    results = set()
    if legs:
        first, others = legs[0], legs[1:]
        for extra in subsets(others):
            part = (first,) + extra
            rest = tuple(x for x in others if x not in extra)
            for gc in range(genus + 1):
                if min_parts > 1 and not rest and gc == genus:
                    continue
                branches = _branches(gc, part)
                if not branches:
                    continue
                for tail in _forests(genus - gc, rest, min_parts - 1):
                    for b in branches:
                        results.add(tuple(sorted(tail + (b,))))
    else:
        # leg-free branches need positive genus
        for gc in range(1, genus + 1):
            if min_parts > 1 and gc == genus:
                continue
            for tail in _forests(genus - gc, (), min_parts - 1):
                for b in _branches(gc, ()):
                    results.add(tuple(sorted(tail + (b,))))
    return tuple(sorted(results))


@lru_cache(maxsize=None)
def _enum_srt_cached(g: int, n: int, m: int) -> Tuple[DecoratedTree, ...]:
    regular = tuple(range(1, n + 1))
    frozen = tuple(range(n + 1, n + m + 1))
    roots = set()
    for g0 in range(g + 1):
        for own in subsets(regular):
            rest = tuple(x for x in regular if x not in own)
            root_legs = tuple(own) + frozen
            # root: 2g0 - 2 + |legs| + #children > 0
            min_children = max(0, 3 - 2 * g0 - len(root_legs))
            for forest in _forests(g - g0, rest, min_children):
                roots.add((g0, root_legs, forest))
    trees = [_materialize(node, n + m) for node in roots]
    return tuple(sorted(trees, key=canonical_code))


def enum_srt(g: int, n: int, m: int) -> List[DecoratedTree]:
    """
    SRT_{g,n,m}: stable rooted trees, regular legs 1..n, frozen legs on the root

    Raises:
        ValueError: when M_{g,n+m} is unstable
    """
    if g < 0 or n < 0 or m < 0 or 2 * g - 2 + n + m <= 0:
        raise ValueError(f"❌ enum_srt: M_{{{g},{n + m}}} is unstable")
    return list(_enum_srt_cached(g, n, m))


def enum_dr_trees(g: int, n: int, k: int) -> List[DecoratedTree]:
    """SRT^k_{g,n,1}: stable rooted trees with k vertices and one frozen leg."""
    if k < 1 or 2 * g - 2 + n + 1 <= 0:
        return []
    return [t for t in _enum_srt_cached(g, n, 1) if t.n_vertices == k]


def _prufer_trees(nv: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    if nv == 1:
        yield ()
        return
    if nv == 2:
        yield ((0, 1),)
        return
    for seq in product(range(nv), repeat=nv - 2):
        degree = [1] * nv
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(v for v in range(nv) if degree[v] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [v for v in range(nv) if degree[v] == 1]
        edges.append((u, w))
        yield tuple(edges)


def enum_srt_bruteforce(g: int, n: int, m: int) -> List[DecoratedTree]:
    """
    Generate-and-filter version of enum_srt for small parameters:
    all vertex counts, genus vectors, labelled trees and leg placements
    """
    if 2 * g - 2 + n + m <= 0:
        raise ValueError(f"❌ enum_srt_bruteforce: M_{{{g},{n + m}}} is unstable")

    found = {}
    for nv in range(1, 2 * g - 2 + n + m + 1):
        for genera in weak_compositions(g, nv):
            for edges in _prufer_trees(nv):
                for placement in product(range(nv), repeat=n):
                    tree = DecoratedTree(
                        genera=genera,
                        legs=tuple(placement) + (0,) * m,
                        edges=edges,
                        root=0
                    )
                    if validate(tree):
                        continue
                    found.setdefault(canonical_code(tree), tree)
    return [found[code] for code in sorted(found)]


# =============================================================================
# COMPLETENESS AND ADMISSIBILITY
# =============================================================================

def is_complete(tree: DecoratedTree, n: int) -> bool:
    """
    Completeness of a balanced tree, conditions checked one by one:
    a) every vertex has a descendant on the deepest canonical level
    b) every regular leg sits on the deepest level
    c) every deepest vertex carries a regular leg
    d) every level has a vertex that is not potentially unstable
    """
    root = tree.root
    nv = tree.n_vertices
    depth = {root: 1}
    parent = {root: None}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for _, _, u in tree.adjacency[v]:
                if u not in depth:
                    depth[u] = depth[v] + 1
                    parent[u] = v
                    nxt.append(u)
        frontier = nxt
    deepest = max(depth.values())

    has_deep_descendant = {v: False for v in range(nv)}
    for v in range(nv):
        if depth[v] == deepest:
            u = v
            while u is not None:
                has_deep_descendant[u] = True
                u = parent[u]
    if not all(has_deep_descendant.values()):
        return False

    if any(depth[tree.legs[i - 1]] != deepest for i in range(1, n + 1)):
        return False

    for v in range(nv):
        if depth[v] == deepest and not any(i <= n for i in tree.legs_at(v)):
            return False

    for level in range(1, deepest + 1):
        stable_found = False
        for v in range(nv):
            if depth[v] != level:
                continue
            unstable_without_extras = v != root and 2 * tree.genera[v] - 2 + tree.valence(v) <= 0
            if not unstable_without_extras:
                stable_found = True
                break
        if not stable_found:
            return False

    return True


def is_admissible(tree: DecoratedTree, q: ExponentAssignment, n: int, m: int) -> bool:
    """Σ_{edges on level k} q(h) <= 2 g_k(T) - 2 + m for every k < deg(T)."""
    view = RootedView(tree, n)
    for k in range(1, view.deg):
        lhs = sum(q.get(('edge', j), 0) for j, mother in view.mother_of_edge.items()
                  if view.level[mother] == k)
        if lhs > 2 * view.cumulative_genus(view.level, k) - 2 + m:
            return False
    return True


@lru_cache(maxsize=None)
def _graded_branches(genus: int, legs: Tuple[int, ...], height: int) -> Tuple[Node, ...]:
    """Subtrees whose leaves are all exactly `height` levels down; legs only on leaves."""
    if not legs:
        return ()
    if height == 0:
        return ((genus, legs, ()),)
    results = set()
    for g0 in range(genus + 1):
        for forest in _graded_forests(genus - g0, legs, height - 1):
            results.add((g0, (), forest))
    return tuple(sorted(results))


@lru_cache(maxsize=None)
def _graded_forests(genus: int, legs: Tuple[int, ...], height: int) -> Tuple[tuple, ...]:
    """Nonempty multisets of graded branches, each with at least one leg."""
    if not legs:
        return ((),) if genus == 0 else ()
    results = set()
    first, others = legs[0], legs[1:]
    for extra in subsets(others):
        part = (first,) + extra
        rest = tuple(x for x in others if x not in extra)
        for gc in range(genus + 1):
            branches = _graded_branches(gc, part, height)
            if not branches:
                continue
            for tail in _graded_forests(genus - gc, rest, height):
                for b in branches:
                    results.add(tuple(sorted(tail + (b,))))
    return tuple(sorted(results))


def _complete_shapes(g: int, n: int, m: int) -> Iterator[DecoratedTree]:
    regular = tuple(range(1, n + 1))
    frozen = tuple(range(n + 1, n + m + 1))

    if 2 * g - 2 + n + m > 0:
        yield _materialize((g, regular + frozen, ()), n + m)

    # a level without a potentially stable vertex needs a new genus unit or a branching
    for depth in range(2, g + n + 1):
        for g0 in range(g + 1):
            for forest in _graded_forests(g - g0, regular, depth - 2):
                if 2 * g0 - 2 + m + len(forest) <= 0:
                    continue
                tree = _materialize((g0, frozen, forest), n + m)
                if is_complete(tree, n):
                    yield tree


def enum_admissible(g: int, n: int, m: int,
                    d: Sequence[int]) -> List[Tuple[DecoratedTree, ExponentAssignment]]:
    """
    SRT^{(b,c,a)}_{g,n,m}: balanced, complete, admissible trees with their q

    q(('leg', i)) = d_i; q(('edge', j)) = number of extra legs on the child minus one.
    """
    if g < 0 or n < 1 or m < 0 or 2 * g - 2 + n + m <= 0 or len(d) != n:
        return []

    results = []
    for tree in sorted(_complete_shapes(g, n, m), key=canonical_code):
        view = rooted_view(tree, n)
        per_level = []
        feasible = True
        for k in range(1, view.deg):
            level_edges = sorted(j for j, mother in view.mother_of_edge.items() if view.level[mother] == k)
            room = 2 * view.cumulative_genus(view.level, k) - 2 + m
            if room < 0:
                feasible = False
                break
            per_level.append((level_edges, list(bounded_compositions(room, len(level_edges)))))
        if not feasible:
            continue

        legs_q = {('leg', i): d[i - 1] for i in range(1, n + 1)}
        for choice in product(*(options for _, options in per_level)):
            q = dict(legs_q)
            for (level_edges, _), values in zip(per_level, choice):
                for j, value in zip(level_edges, values):
                    q[('edge', j)] = value
            results.append((tree, q))

    logger.debug(f"📊 enum_admissible({g},{n},{m},{tuple(d)}): {len(results)} decorated trees")
    return results


# =============================================================================
# LEVEL FUNCTIONS
# =============================================================================

@lru_cache(maxsize=100000)
def all_level_functions(tree: DecoratedTree) -> Tuple[LevelFunction, ...]:
    """Root ↦ 1, mother < daughter, surjective onto 1..deg(l)."""
    view = RootedView(tree, 0)
    nv = tree.n_vertices
    order = view.preorder
    found = []

    def assign(idx, levels):
        if idx == len(order):
            used = set(levels)
            if used == set(range(1, max(levels) + 1)):
                found.append(tuple(levels))
            return
        v = order[idx]
        lowest = levels[view.parent[v]] + 1
        for value in range(lowest, nv + 1):
            levels[v] = value
            assign(idx + 1, levels)
        levels[v] = 0

    levels = [0] * nv
    levels[view.root] = 1
    assign(1, levels)
    return tuple(sorted(found))


def is_p_admissible(view: RootedView, p: ExponentAssignment, levels: LevelFunction, m: int) -> bool:
    """
    For 1 <= i < deg(l):
    Σ_{h in H̃, l(h) <= i} p(h) + #{edge halves with l(h) < i} <= 2 Σ_{l(v) <= i} g(v) - 2 + m
    """
    deg = max(levels)
    for i in range(1, deg):
        lhs = 0
        for key in view.halves:
            at = levels[view.half_vertex(key)]
            if at <= i:
                lhs += p.get(key, 0)
            if key[0] == 'edge' and at < i:
                lhs += 1
        if lhs > 2 * view.cumulative_genus(levels, i) - 2 + m:
            return False
    return True


def enum_levels(tree: DecoratedTree, p: ExponentAssignment, m: int, n: Optional[int] = None) -> List[LevelFunction]:
    """p-admissible level functions of a rooted tree."""
    if n is None:
        n = sum(1 for key in p if key[0] == 'leg')
    view = rooted_view(tree, n)
    return [levels for levels in all_level_functions(tree) if is_p_admissible(view, p, levels, m)]


# =============================================================================
# CHAINS
# =============================================================================

@dataclass(frozen=True)
class ChainProfile:
    """(g_1..g_k, d_1..d_k); vertex k carries the frozen legs"""
    genera: Tuple[int, ...]
    degrees: Tuple[int, ...]


def enum_chains(g: int, d: int, m: int, k: int) -> List[ChainProfile]:
    """
    Index set of Γ^{g,m}_{d|k}

    g_1..g_{k-1} >= 1, g_k >= 0 if m >= 2 else >= 1, Σg = g,
    Σd_i + k - 1 = d, and for i = 2..k:
    d_i + ... + d_k + k - i <= 2(g_i + ... + g_k) + m - 2
    """
    if k < 1 or g < 0 or d < 0:
        return []
    total = d - (k - 1)
    if total < 0:
        return []

    last_min = 0 if m >= 2 else 1
    profiles = []
    for genera in weak_compositions(g, k):
        if any(x < 1 for x in genera[:-1]) or genera[-1] < last_min:
            continue
        if k == 1 and 2 * g - 2 + 1 + m <= 0:
            continue
        for degrees in weak_compositions(total, k):
            ok = True
            for i in range(2, k + 1):
                tail_d = sum(degrees[i - 1:])
                tail_g = sum(genera[i - 1:])
                if tail_d + k - i > 2 * tail_g + m - 2:
                    ok = False
                    break
            if ok:
                profiles.append(ChainProfile(tuple(genera), tuple(degrees)))
    return sorted(profiles, key=lambda x: (x.genera, x.degrees))


def enum_gamma_chains(g: int, d: int, k: int) -> List[ChainProfile]:
    """
    Index set of γ^g_{d|k} (two-leg chains, leg 2 on vertex k)

    All g_i >= 1, Σg = g, Σd_i + k - 1 = d, and for i = 1..k-1:
    d_1 + ... + d_i + i - 1 <= 2(g_1 + ... + g_i) - 1.
    Empty for d >= 2g.
    """
    if k < 1 or g < 1 or d < 0 or d >= 2 * g:
        return []
    total = d - (k - 1)
    if total < 0:
        return []

    profiles = []
    for genera in weak_compositions(g, k):
        if any(x < 1 for x in genera):
            continue
        for degrees in weak_compositions(total, k):
            if all(sum(degrees[:i]) + i - 1 <= 2 * sum(genera[:i]) - 1 for i in range(1, k)):
                profiles.append(ChainProfile(tuple(genera), tuple(degrees)))
    return sorted(profiles, key=lambda x: (x.genera, x.degrees))
