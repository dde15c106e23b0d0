from fractions import Fraction

import pytest

from core.b_classes import BSpec, b_class_fast
from core.dr_side import (
    LinearForm,
    PolyClass,
    a0_class_genus0,
    a1_class_genus0,
    c_coefficient,
    check_a_polynomial,
    compute_flows,
    divide_by_leg_sum,
    pushforward_polyclass,
)
from core.graph_core import DecoratedTree, single_vertex_class
from core.intersect import pairing_difference
from core.outcome import DivisibilityError
from core.tree_enum import enum_dr_trees


class TestLinearForm:

    def test_zero_coefficients_dropped(self):
        assert LinearForm.from_dict({1: 1, 2: 0}) == LinearForm.variable(1)

    def test_arithmetic(self):
        a1, a2 = LinearForm.variable(1), LinearForm.variable(2)
        assert (a1 + a2) - a2 == a1
        assert (a1 - a1).is_zero()
        assert (-(a1 + a2)).as_dict() == {1: -1, 2: -1}

    def test_frozen_substitution(self):
        assert LinearForm.variable(3).substitute_frozen(2).as_dict() == {1: -1, 2: -1}
        assert LinearForm.variable(1).substitute_frozen(2) == LinearForm.variable(1)


class TestFlows:

    @pytest.mark.parametrize("n,k", [(2, 1), (3, 2), (4, 2), (4, 3)])
    def test_flow_is_conserved(self, n, k):
        for tree in enum_dr_trees(0, n, k):
            assert compute_flows(tree, n).conserves_flow()

    def test_edge_flow_sums_legs_below(self):
        tree = DecoratedTree(genera=(0, 0), legs=(0, 1, 1, 0), edges=((0, 1),), root=0)
        assert compute_flows(tree, 3).edge_flow(0).as_dict() == {2: 1, 3: 1}

    def test_c_coefficient(self):
        tree = DecoratedTree(genera=(1, 2), legs=(1, 0), edges=((0, 1),), root=0)
        assert c_coefficient(tree) == Fraction(1, 3)

    def test_c_coefficient_of_single_vertex(self):
        assert c_coefficient(DecoratedTree(genera=(0,), legs=(0, 0, 0), root=0)) == 1


class TestCheckedPolynomial:

    def test_unstable_raises(self):
        with pytest.raises(ValueError):
            check_a_polynomial(1, 1)

    def test_single_vertex_term(self):
        poly = check_a_polynomial(2, 1)
        assert poly.coefficient((0, 0)) == single_vertex_class(0, (0, 0, 0))

    def test_pushforward_then_divide(self):
        pushed = pushforward_polyclass(check_a_polynomial(3, 2), 4)
        assert pushed.n_points == 3
        assert pushed.degrees() == [1]
        quotient = divide_by_leg_sum(pushed)
        assert quotient.coefficient((0, 0, 0)) == single_vertex_class(0, (0, 0, 0))

    def test_indivisible_polynomial_raises(self):
        poly = PolyClass(0, 3, 2, {(1, 0): single_vertex_class(0, (0, 0, 0))})
        with pytest.raises(DivisibilityError):
            divide_by_leg_sum(poly)

    def test_empty_polyclass(self):
        poly = PolyClass(0, 4, 3)
        assert poly.is_zero()
        assert poly.coefficient((1, 0, 0)).is_zero()


class TestGenusZeroClasses:

    def test_a1_fundamental_class(self):
        assert a1_class_genus0(2, (0, 0)) == single_vertex_class(0, (0, 0, 0))

    def test_a0_fundamental_class(self):
        assert a0_class_genus0(3, (0, 0, 0)) == single_vertex_class(0, (0, 0, 0))

    @pytest.mark.parametrize("n,d", [(2, (0,)), (2, (0, -1))])
    def test_a1_rejects_bad_exponents(self, n, d):
        with pytest.raises(ValueError):
            a1_class_genus0(n, d)

    def test_a0_needs_three_points(self):
        with pytest.raises(ValueError):
            a0_class_genus0(2, (0, 0))

    @pytest.mark.parametrize("d", [(0, 0, 0), (1, 0, 0), (0, 0, 1)])
    def test_b1_agrees_with_a1(self, engine, d):
        b = b_class_fast(BSpec(0, 3, 1, d))
        assert pairing_difference(b, a1_class_genus0(3, d), degree=sum(d)).passed

    @pytest.mark.parametrize("d", [(0, 0, 0), (0, 0, 0, 0), (1, 0, 0, 0)])
    def test_b0_agrees_with_a0(self, engine, d):
        n = len(d)
        b = b_class_fast(BSpec(0, n, 0, d))
        assert pairing_difference(b, a0_class_genus0(n, d), degree=sum(d)).passed
