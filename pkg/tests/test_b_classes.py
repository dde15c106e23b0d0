from fractions import Fraction

import pytest

from core.b_classes import (
    BSpec,
    b_class_definition,
    b_class_fast,
    c_lvl,
    c_str,
    gamma_class,
    lp_relation_class,
    one_point_inductive_difference,
    p_coefficients,
    pochhammer,
    reduction_difference,
    string_pushforward,
    tilde_b_class,
    tilde_b_class_pushforward,
    unfolded_b_class,
)
from core.graph_core import DecoratedTree, forgetful_pullback, single_vertex_class
from core.intersect import pairing_difference, vanishing_sweep

SMALL_SPECS = [
    (0, 1, 2, (0,)),
    (0, 2, 1, (1, 0)),
    (0, 2, 2, (1, 0)),
    (0, 3, 1, (1, 0, 0)),
    (1, 1, 1, (1,)),
    (1, 1, 2, (2,)),
    (1, 2, 1, (1, 1)),
    (1, 2, 2, (2, 0)),
]


class TestBSpec:

    def test_degree_and_dimension(self):
        spec = BSpec(1, 2, 2, [2, 1])
        assert spec.d == (2, 1)
        assert spec.degree == 3
        assert spec.dimension == 4

    @pytest.mark.parametrize("g,n,m,d", [
        (0, 1, 1, (0,)),
        (1, 2, 1, (1,)),
        (-1, 1, 3, (0,)),
        (1, 1, 1, (-1,)),
        (1, 0, 2, ()),
    ])
    def test_invalid_specs(self, g, n, m, d):
        with pytest.raises(ValueError):
            BSpec(g, n, m, d).validate()

    def test_as_dict(self):
        assert BSpec(1, 1, 2, (3,)).as_dict() == {"g": 1, "n": 1, "m": 2, "d": [3]}


class TestStringPushforward:

    def test_pochhammer(self):
        assert pochhammer(5, 2) == 20
        assert pochhammer(2, 3) == 0
        assert pochhammer(7, 0) == 1

    def test_single_leg(self):
        assert string_pushforward(1, (2,), 1) == {(1,): Fraction(1)}

    def test_multinomial_coefficients(self):
        assert string_pushforward(0, (2, 1, 0), 2) == {(1, 0, 0): Fraction(2), (0, 1, 0): Fraction(1)}

    def test_forget_nothing_is_identity(self):
        assert string_pushforward(1, (3, 0), 0) == {(3, 0): Fraction(1)}

    def test_unstable_target_marker(self):
        assert string_pushforward(0, (1, 0), 2) == {(-1, 0): Fraction(1)}
        assert string_pushforward(0, (0, 0), 2) == {}
        assert string_pushforward(0, (0, 1), 2) == {}

    def test_too_few_exponents_vanish(self):
        assert string_pushforward(1, (1, 0), 2) == {}


class TestBClass:

    @pytest.mark.parametrize("method", [b_class_definition, b_class_fast])
    def test_top_degree_one_point_class(self, method):
        assert method(BSpec(1, 1, 1, (2,))) == single_vertex_class(1, (2, 0))

    @pytest.mark.parametrize("method", [b_class_definition, b_class_fast])
    def test_above_dimension_is_zero(self, method):
        assert method(BSpec(0, 1, 2, (3,))).is_zero()

    @pytest.mark.parametrize("g,n,m,d", SMALL_SPECS)
    def test_definition_matches_fast(self, g, n, m, d):
        spec = BSpec(g, n, m, d)
        assert b_class_definition(spec) == b_class_fast(spec)

    @pytest.mark.parametrize("g,n,m,d", SMALL_SPECS)
    def test_tilde_constructions_agree(self, g, n, m, d):
        spec = BSpec(g, n, m, d)
        assert tilde_b_class(spec) == tilde_b_class_pushforward(spec)

    @pytest.mark.parametrize("g,n,m,d", [s for s in SMALL_SPECS if s[2] >= 2])
    def test_trailing_zero_is_pullback(self, engine, g, n, m, d):
        tilde = tilde_b_class(BSpec(g, n, m, d))
        report = pairing_difference(tilde_b_class(BSpec(g, n + 1, m, d + (0,))),
                                    forgetful_pullback(tilde, n + 1), degree=sum(d))
        assert report.passed

    def test_trailing_zero_fails_with_one_frozen_leg(self, engine):
        tilde = tilde_b_class(BSpec(1, 1, 1, (1,)))
        report = pairing_difference(tilde_b_class(BSpec(1, 2, 1, (1, 0))),
                                    forgetful_pullback(tilde, 2), degree=1)
        assert not report.passed
        assert {"exponents": [2, 0, 0], "value": "-1/24"} in report.witnesses()

    def test_classes_are_homogeneous(self):
        for g, n, m, d in SMALL_SPECS:
            c = b_class_fast(BSpec(g, n, m, d))
            assert c.is_zero() or c.degrees() == [sum(d)]


class TestOnePointChains:

    @pytest.mark.parametrize("g,m,d", [(0, 2, 1), (0, 3, 2), (1, 1, 2), (1, 2, 3)])
    def test_unfolded_matches_definition(self, g, m, d):
        assert unfolded_b_class(g, m, d) == b_class_definition(BSpec(g, 1, m, (d,)))

    def test_unfolding_needs_large_degree(self):
        with pytest.raises(ValueError):
            unfolded_b_class(1, 2, 2)

    def test_single_vertex_chain(self):
        assert gamma_class(1, 2, 3, 1) == single_vertex_class(1, (3, 0, 0))


class TestRelations:

    @pytest.mark.parametrize("g", [1, 2])
    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_first_relation_pairs_to_zero(self, engine, g, r):
        assert vanishing_sweep(lp_relation_class(1, g, r), degree=2 * g + r).passed

    @pytest.mark.parametrize("g", [0, 1, 2])
    @pytest.mark.parametrize("m", [2, 3])
    def test_second_relation_pairs_to_zero(self, engine, g, m):
        assert vanishing_sweep(lp_relation_class(2, g, 0, m), degree=2 * g + m - 1).passed

    @pytest.mark.parametrize("variant,g,r,m", [(3, 1, 0, 1), (1, 0, 0, 1), (2, 1, 0, 1), (1, 1, -1, 1)])
    def test_relation_arguments_checked(self, variant, g, r, m):
        with pytest.raises(ValueError):
            lp_relation_class(variant, g, r, m)

    @pytest.mark.parametrize("ell", [1, 2])
    def test_inductive_identity(self, engine, ell):
        assert vanishing_sweep(one_point_inductive_difference(1, 2, ell), degree=3).passed

    def test_inductive_identity_needs_two_frozen_legs(self):
        with pytest.raises(ValueError):
            one_point_inductive_difference(1, 1, 1)


class TestVanishingRows:

    @pytest.mark.parametrize("g,n,m,d", [(1, 1, 2, (3,)), (0, 3, 2, (1, 0, 0)), (0, 2, 2, (1, 0))])
    def test_theorem_rows_vanish(self, engine, g, n, m, d):
        report = vanishing_sweep(b_class_fast(BSpec(g, n, m, d)), degree=sum(d))
        assert report.passed and not report.vacuous

    def test_above_dimension_is_vacuous(self, engine):
        report = vanishing_sweep(b_class_fast(BSpec(1, 1, 2, (4,))), degree=4)
        assert report.vacuous


class TestGeneratingPolynomial:

    def test_coefficients_keyed_by_exponents(self):
        assert set(p_coefficients(0, 2, 2, 2)) == {(2, 0), (1, 1), (0, 2)}
        assert set(p_coefficients(1, 1, 2, 3)) == {(3,)}

    def test_degree_bound(self, engine):
        for c in p_coefficients(0, 3, 2, 2).values():
            assert vanishing_sweep(c, degree=2).passed

    def test_reduction_difference_pairs_to_zero(self, engine):
        assert vanishing_sweep(reduction_difference(0, 2, (1, 0, 0), 1), degree=2).passed

    def test_reduction_rejects_unknown_leg(self):
        with pytest.raises(ValueError):
            reduction_difference(1, 2, (1, 1), 3)


class TestCombinatorialCoefficients:

    def test_single_vertex(self):
        tree = DecoratedTree(genera=(1,), legs=(0, 0), root=0)
        assert c_lvl(tree, {('leg', 1): 2}, 1) == 1
        assert c_str(tree, {('leg', 1): 2}, (2,)) == 1

    def test_degree_mismatch_gives_zero(self):
        tree = DecoratedTree(genera=(1,), legs=(0, 0), root=0)
        assert c_str(tree, {('leg', 1): 1}, (2,)) == 0

    def test_alternating_level_count(self):
        tree = DecoratedTree(genera=(0, 1, 1), legs=(0, 0), edges=((0, 1), (0, 2)), root=0)
        p = {('leg', 1): 0, ('edge', 0): 0, ('edge', 1): 0}
        # one level function of degree 2, two of degree 3
        assert c_lvl(tree, p, 10) == 1

    def test_childless_vertex_without_legs(self):
        tree = DecoratedTree(genera=(1, 1), legs=(0, 0), edges=((0, 1),), root=0)
        assert c_str(tree, {('leg', 1): 0, ('edge', 0): 0}, (1,)) == 0
