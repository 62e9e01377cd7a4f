from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affstar.poisson import (
    Polynomial,
    affine_2d,
    generic_poly,
    is_poisson,
    jacobiator,
    merge_contexts,
    nambu_3d,
    parse_polynomial,
    with_context,
)

VARS = ("x", "y", "z")


@st.composite
def polynomials(draw):
    n_terms = draw(st.integers(min_value=0, max_value=5))
    terms = {}
    for _ in range(n_terms):
        exp = tuple(draw(st.integers(min_value=0, max_value=3)) for _ in VARS)
        terms[exp] = Fraction(
            draw(st.integers(min_value=-9, max_value=9)),
            draw(st.integers(min_value=1, max_value=9)),
        )
    return Polynomial(VARS, terms)


class TestPolynomialRing:
    @given(polynomials(), polynomials(), polynomials())
    @settings(max_examples=80)
    def test_mul_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(polynomials(), polynomials(), polynomials())
    @settings(max_examples=80)
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(polynomials(), polynomials())
    def test_add_commutes(self, a, b):
        assert a + b == b + a

    @given(polynomials())
    def test_sub_self_is_zero(self, a):
        assert (a - a).is_zero

    def test_exactness(self):
        third = Polynomial.constant(VARS, Fraction(1, 3))
        assert (third * 3) == Polynomial.constant(VARS, 1)

    @given(polynomials(), polynomials())
    @settings(max_examples=50)
    def test_leibniz_rule_for_diff(self, a, b):
        d = lambda p: p.diff("x")
        assert d(a * b) == d(a) * b + a * d(b)

    def test_parse_round_trip(self):
        p = parse_polynomial("2*x^2 y - 1/3*z + 4", VARS)
        assert parse_polynomial(str(p), VARS) == p

    def test_degree_subset(self):
        p = parse_polynomial("x^2 y + z", VARS)
        assert p.degree() == 3
        assert p.degree(("z",)) == 1


class TestConstructors:
    def test_affine_2d(self, P2):
        assert P2.dim == 2 and P2.is_affine
        sub = P2.component(1, 2).substitute({"alpha": 1, "beta": 0, "gamma": 0})
        assert sub == Polynomial.variable(P2.vars, "x")
        assert P2.component(2, 1) == -P2.component(1, 2)
        assert P2.component(1, 1).is_zero

    def test_nambu_constant_leaf(self):
        one = Polynomial.constant(VARS, 1)
        z = Polynomial.variable(VARS, "z")
        N = nambu_3d(one, z)
        assert N.component(1, 2) == Polynomial.constant(VARS, 1)
        assert N.component(1, 3).is_zero and N.component(2, 3).is_zero

    def test_nambu_sphere(self):
        one = Polynomial.constant(VARS, 1)
        a = parse_polynomial("x^2 + y^2 + z^2", VARS)
        N = nambu_3d(one, a)
        assert N.component(1, 2) == parse_polynomial("2*z", VARS)
        assert N.component(2, 3) == parse_polynomial("2*x", VARS)
        assert N.component(3, 1) == parse_polynomial("2*y", VARS)

    def test_nambu_rejects_missing_coordinates(self):
        p = Polynomial.constant(("x", "y"), 1)
        with pytest.raises(ValueError):
            nambu_3d(p, p)

    def test_generic_degrees_give_affine_structures(self, nambu02, nambu11):
        assert nambu02.is_affine and nambu11.is_affine


def brute_jacobiator_component(P, i, j, k):
    """Independent triple-loop over the cyclic sum and the contraction index."""
    total = Polynomial.zero(P.vars)
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for ell in range(1, P.dim + 1):
            total = total + P.component(a, ell) * P.component(b, c).diff(
                P.coords[ell - 1]
            )
    return total


class TestJacobiator:
    def test_two_dimensional_is_zero(self, P2):
        assert jacobiator(P2).is_zero and is_poisson(P2)

    def test_nambu_structures_are_poisson(self, nambu02, nambu11):
        assert is_poisson(nambu02) and is_poisson(nambu11)

    def test_matches_brute_force_on_non_poisson_example(self):
        from affstar.poisson import _build

        Q = _build(
            3,
            VARS,
            (),
            {
                (1, 2): Polynomial.variable(VARS, "x"),
                (1, 3): Polynomial.variable(VARS, "y"),
            },
        )
        J = jacobiator(Q)
        for i, j, k in product(range(1, 4), repeat=3):
            assert J.component(i, j, k) == brute_jacobiator_component(Q, i, j, k)

    def test_detects_non_poisson(self):
        from affstar.poisson import _build

        NP = _build(
            3,
            VARS,
            (),
            {
                (1, 2): Polynomial.variable(VARS, "y"),
                (2, 3): Polynomial.variable(VARS, "x"),
            },
        )
        assert not is_poisson(NP)

    def test_total_antisymmetry(self, nambu02):
        from affstar.poisson import _build

        Q = _build(
            3,
            VARS,
            (),
            {
                (1, 2): parse_polynomial("x y", VARS),
                (1, 3): parse_polynomial("z", VARS),
                (2, 3): parse_polynomial("y^2", VARS),
            },
        )
        J = jacobiator(Q)
        base = J.component(1, 2, 3)
        assert J.component(2, 1, 3) == -base
        assert J.component(3, 1, 2) == base
        assert J.component(1, 1, 2).is_zero


def test_with_context_embedding():
    p = parse_polynomial("x + 2*y", ("x", "y"))
    q = with_context(p, ("x", "y", "t"))
    assert q.vars == ("x", "y", "t")
    assert q.degree(("t",)) == 0


def test_merge_contexts_shares_parameters():
    rho = generic_poly(1, "r")
    a = generic_poly(1, "a")
    rho2, a2 = merge_contexts(rho, a, coords=VARS)
    assert rho2.vars == a2.vars
