import pytest

from core.graph_core import DecoratedTree, canonical_code, validate
from core.tree_enum import (
    ChainProfile,
    RootedView,
    all_level_functions,
    enum_admissible,
    enum_chains,
    enum_dr_trees,
    enum_gamma_chains,
    enum_levels,
    enum_srt,
    enum_srt_bruteforce,
    is_admissible,
    is_complete,
)


class TestEnumSrt:

    @pytest.mark.parametrize("g,n,m", [
        (0, 3, 0), (0, 4, 0), (0, 2, 1), (0, 2, 2), (0, 3, 1),
        (1, 1, 0), (1, 1, 1), (1, 2, 1), (1, 1, 2), (2, 1, 0),
    ])
    def test_matches_bruteforce(self, g, n, m):
        fast = {canonical_code(t) for t in enum_srt(g, n, m)}
        slow = {canonical_code(t) for t in enum_srt_bruteforce(g, n, m)}
        assert fast == slow

    def test_every_tree_is_valid_and_rooted(self):
        for tree in enum_srt(1, 2, 2):
            assert tree.root is not None
            assert validate(tree) == []

    def test_frozen_legs_on_root(self):
        for tree in enum_srt(1, 2, 2):
            assert tree.legs[2] == tree.root and tree.legs[3] == tree.root

    def test_no_duplicates(self):
        trees = enum_srt(1, 2, 1)
        assert len({canonical_code(t) for t in trees}) == len(trees)

    def test_single_tree_on_m03(self):
        assert len(enum_srt(0, 3, 0)) == 1

    def test_unstable_raises(self):
        with pytest.raises(ValueError):
            enum_srt(0, 1, 1)


class TestDrTrees:

    def test_counts_on_m04(self):
        assert len(enum_dr_trees(0, 3, 1)) == 1
        # one regular leg stays on the root, the other two go to the child
        assert len(enum_dr_trees(0, 3, 2)) == 3
        assert enum_dr_trees(0, 3, 3) == []

    def test_unstable_is_empty(self):
        assert enum_dr_trees(0, 1, 1) == []


class TestAdmissible:

    @pytest.mark.parametrize("g,n,m,d", [
        (0, 2, 2, (1, 0)), (0, 3, 2, (1, 0, 0)), (1, 1, 2, (3,)), (1, 2, 2, (2, 1)), (2, 1, 2, (5,)),
    ])
    def test_trees_are_complete_and_admissible(self, g, n, m, d):
        for tree, q in enum_admissible(g, n, m, d):
            assert is_complete(tree, n)
            assert is_admissible(tree, q, n, m)
            assert all(q[('leg', i)] == d[i - 1] for i in range(1, n + 1))

    def test_single_vertex_always_present(self):
        found = enum_admissible(1, 1, 1, (2,))
        assert [tree.n_vertices for tree, _ in found] == [1]

    def test_unstable_is_empty(self):
        assert enum_admissible(0, 1, 1, (0,)) == []
        assert enum_admissible(1, 2, 1, (1,)) == []

    def test_complete_rejects_unstable_deepest_level(self):
        # genus-0 child with a single regular leg is potentially unstable
        tree = DecoratedTree(genera=(1, 0), legs=(1, 0), edges=((0, 1),), root=0)
        assert not is_complete(tree, 1)


class TestRootedView:

    def test_levels_and_leg_sets(self):
        tree = DecoratedTree(genera=(1, 0, 0), legs=(1, 2, 2, 0), edges=((0, 1), (1, 2)), root=0)
        view = RootedView(tree, 3)
        assert view.level == [1, 2, 3]
        assert view.deg == 3
        assert view.leg_sets[('edge', 0)] == (1, 2, 3)
        assert view.leg_sets[('edge', 1)] == (2, 3)
        assert view.descendant_halves[('edge', 0)] == (('leg', 1), ('leg', 2), ('leg', 3), ('edge', 1))

    def test_unrooted_rejected(self):
        with pytest.raises(ValueError):
            RootedView(DecoratedTree(genera=(1,), legs=(0,)), 1)

    def test_decorate_puts_exponents_on_mother_side(self):
        tree = DecoratedTree(genera=(1, 0), legs=(1, 1, 0), edges=((1, 0),), root=0)
        view = RootedView(tree, 2)
        decorated = view.decorate({('leg', 1): 1, ('leg', 2): 0, ('edge', 0): 2})
        assert decorated.root is None
        assert decorated.edge_psi == ((0, 2),)
        assert decorated.leg_psi == (1, 0, 0)


class TestLevelFunctions:

    def test_single_vertex(self):
        assert all_level_functions(DecoratedTree(genera=(1,), legs=(0,), root=0)) == ((1,),)

    def test_root_with_two_children(self):
        tree = DecoratedTree(genera=(0, 1, 1), legs=(0,), edges=((0, 1), (0, 2)), root=0)
        assert all_level_functions(tree) == ((1, 2, 2), (1, 2, 3), (1, 3, 2))


class TestChains:

    def test_gamma_vanishes_for_long_chains(self):
        assert enum_chains(1, 3, 2, 3) == []
        assert enum_chains(1, 1, 1, 2) == []

    def test_single_vertex_chain(self):
        assert enum_chains(1, 3, 2, 1) == [ChainProfile((1,), (3,))]

    def test_two_vertex_chain_conditions(self):
        for profile in enum_chains(1, 3, 2, 2):
            assert profile.genera[0] >= 1
            assert sum(profile.degrees) + 1 == 3
            assert profile.degrees[1] <= 2 * profile.genera[1] + 2 - 2

    def test_gamma_chains(self):
        assert enum_gamma_chains(1, 1, 1) == [ChainProfile((1,), (1,))]
        assert enum_gamma_chains(1, 2, 1) == []
        assert enum_gamma_chains(0, 0, 1) == []


class TestEnumLevels:

    def test_single_vertex(self):
        tree = DecoratedTree(genera=(1,), legs=(0, 0, 0), root=0)
        assert enum_levels(tree, {('leg', 1): 2}, 2) == [(1,)]

    def test_genus_zero_root_blocks_every_level_function(self):
        # leg 1 and the frozen leg on a genus-0 root, leg 2 on a genus-1 child
        tree = DecoratedTree(genera=(0, 1), legs=(0, 1, 0), edges=((0, 1),), root=0)
        p = {('leg', 1): 0, ('leg', 2): 0, ('edge', 0): 0}
        assert enum_levels(tree, p, 1) == []

    def test_loose_bound_keeps_every_level_function(self):
        tree = DecoratedTree(genera=(0, 1, 1), legs=(0, 0), edges=((0, 1), (0, 2)), root=0)
        p = {('leg', 1): 0, ('edge', 0): 0, ('edge', 1): 0}
        assert enum_levels(tree, p, 10) == list(all_level_functions(tree))
