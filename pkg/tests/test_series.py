from fractions import Fraction

import pytest

from affstar.coefficients import (
    Coefficient,
    ZetaDegreeError,
    parse_coefficient,
)
from affstar.graphs import parse_encoding, serialize
from affstar.operators import GraphSum, evaluate_sum
from affstar.poisson import Polynomial
from affstar.series import (
    EMPTY,
    WEDGE,
    GraphSeries,
    associator,
    dumps_star,
    insert,
    loads_star,
    star_apply,
)


class TestCoefficient:
    @pytest.mark.parametrize(
        "text,rational,zeta",
        [
            ("-1/6", Fraction(-1, 6), 0),
            ("1", 1, 0),
            ("15/4*zeta(3)^2/pi^6-19/3240", Fraction(-19, 3240), Fraction(15, 4)),
            (
                "13/2903040-1/256*zeta(3)^2/pi^6",
                Fraction(13, 2903040),
                Fraction(-1, 256),
            ),
            ("-zeta(3)^2/pi^6+293/181440", Fraction(293, 181440), -1),
            ("zeta(3)^2/pi^6", 0, 1),
            ("4*zeta(3)^2/pi^6-43/7560", Fraction(-43, 7560), 4),
        ],
    )
    def test_parse(self, text, rational, zeta):
        c = parse_coefficient(text)
        assert c.rational == rational and c.zeta == zeta

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_coefficient("3*tau")
        with pytest.raises(ValueError):
            parse_coefficient("1/6/7")

    @pytest.mark.parametrize(
        "text", ["-1/6", "15/4*zeta(3)^2/pi^6-19/3240", "-zeta(3)^2/pi^6+1/2", "0"]
    )
    def test_serializer_roundtrip(self, text):
        c = parse_coefficient(text)
        assert parse_coefficient(str(c)) == c

    def test_zeta_degree_guard(self):
        z = Coefficient(0, 1)
        with pytest.raises(ZetaDegreeError):
            z * z

    def test_ring_ops(self):
        a = Coefficient(Fraction(1, 2), Fraction(1, 3))
        b = Coefficient(Fraction(2), 0)
        assert a + b == Coefficient(Fraction(5, 2), Fraction(1, 3))
        assert a * b == Coefficient(1, Fraction(2, 3))
        assert a - a == Coefficient()


class TestFileFormat:
    def test_bundled_counts(self, star_aff, star_red):
        assert star_aff.nonzero_count() == 1423
        assert star_red.nonzero_count() == 326

    def test_bundled_order_profile(self, star_aff):
        assert [len(star_aff[k]) for k in range(8)] == [1, 1, 4, 6, 35, 84, 334, 958]

    def test_roundtrip(self, star_red):
        assert loads_star(dumps_star(star_red)) == star_red

    def test_multiplication_only_series(self):
        series = loads_star("h^0:\n2 0 1  1\n")
        assert series.order == 0
        assert len(series[0]) == 1

    def test_order_mismatch_rejected(self):
        with pytest.raises(ValueError, match="aerial"):
            loads_star("h^1:\n2 0 1  1\n")

    def test_duplicates_sum_with_warning(self, caplog):
        text = "h^1:\n2 1 1   0 1    1\n2 1 1   1 0    1/2\n"
        with caplog.at_level("WARNING"):
            series = loads_star(text)
        assert "duplicate" in caplog.text
        ((g, c),) = series[1].terms.items()
        assert c == Coefficient(Fraction(1, 2))

    def test_normalization_on_load(self):
        series = loads_star("h^1:\n2 1 1   1 0    1\n")
        ((g, c),) = series[1].terms.items()
        assert serialize(g) == "2 1 1   0 1" and c == Coefficient(-1)


class TestInsert:
    def test_wedge_into_wedge(self):
        out = insert(WEDGE, 0, WEDGE)
        assert len(out) == 3
        assert all(g.sinks == 3 for g in out.terms)

    def test_empty_guest_spreads_by_leibniz(self):
        out = insert(WEDGE, 0, EMPTY)
        assert sorted(serialize(g) for g in out.terms) == [
            "3 1 1   0 2",
            "3 1 1   1 2",
        ]

    def test_empty_host(self):
        out = insert(EMPTY, 0, WEDGE)
        assert [serialize(g) for g in out.terms] == ["3 1 1   0 1"]
        out = insert(EMPTY, 1, WEDGE)
        assert [serialize(g) for g in out.terms] == ["3 1 1   1 2"]

    def test_sink_index_validation(self):
        with pytest.raises(Exception):
            insert(WEDGE, 2, WEDGE)

    def test_sink_order_convention(self):
        # at sink 1 the host's remaining sink becomes argument 0
        out = insert(WEDGE, 1, EMPTY)
        assert sorted(serialize(g) for g in out.terms) == [
            "3 1 1   0 1",
            "3 1 1   0 2",
        ]


class TestAssociator:
    def test_order_one_collapses(self, star_aff):
        A = associator(star_aff.truncated(1), 1)
        assert len(A[0]) == 0 and len(A[1]) == 0

    def test_h2_has_three_graphs_in_111(self, star_red):
        A = associator(star_red.truncated(2), 2)
        slices = A[2].tri_differential_slices()
        assert set(slices) == {(1, 1, 1)}
        assert len(slices[(1, 1, 1)]) == 3

    def test_h3_reduced_has_seven_orders(self, star_red):
        A = associator(star_red.truncated(3), 3)
        assert len(A[3].tri_differential_slices()) == 7

    def test_scaling_by_zero_kills_higher_orders(self, star_red):
        scaled = GraphSeries(
            2,
            2,
            {
                0: star_red[0],
                1: star_red[1].scaled(0),
                2: star_red[2].scaled(0),
            },
        )
        A = associator(scaled, 2)
        assert all(len(A[k]) == 0 for k in range(3))

    def test_affine_filter_only_drops_high_in_degree(self, star_red):
        A_full = associator(star_red.truncated(3), 3, affine_filter=False)
        A_filt = associator(star_red.truncated(3), 3, affine_filter=True)
        for g in A_filt[3].terms:
            assert max(g.in_degrees()[3:]) <= 1
        dropped = set(A_full[3].terms) - set(A_filt[3].terms)
        assert all(max(g.in_degrees()[3:]) >= 2 for g in dropped)

    def test_insertion_matches_operator_composition(self, star_red, P2):
        """(f*g)*h - f*(g*h) computed through graphs equals the direct
        composition of the bidifferential operators."""
        x = Polynomial.variable(P2.vars, "x")
        y = Polynomial.variable(P2.vars, "y")
        f, g, h = x * y, x + y, y * y
        K = 3
        A = associator(star_red.truncated(K), K)
        for k in range(K + 1):
            via_graphs = evaluate_sum(A[k], P2, [f, g, h]).rational
            direct = Polynomial.zero(P2.vars)
            for p in range(k + 1):
                q = k - p
                fg = evaluate_sum(star_red[q], P2, [f, g]).rational
                gh = evaluate_sum(star_red[q], P2, [g, h]).rational
                left = evaluate_sum(star_red[p], P2, [fg, h]).rational
                right = evaluate_sum(star_red[p], P2, [f, gh]).rational
                direct = direct + left - right
            assert via_graphs == direct, k


class TestStarApply:
    def test_order_zero_multiplies(self, star_red, P2):
        x = Polynomial.variable(P2.vars, "x")
        y = Polynomial.variable(P2.vars, "y")
        values = star_apply(star_red, P2, x, y, K=1)
        assert values[0].rational == x * y

    def test_order_one_is_the_bracket_component(self, star_red, P2):
        x = Polynomial.variable(P2.vars, "x")
        y = Polynomial.variable(P2.vars, "y")
        values = star_apply(star_red, P2, x, y, K=1)
        assert values[1].rational == P2.component(1, 2)

    def test_commutator_at_order_one(self, star_red, P2):
        x = Polynomial.variable(P2.vars, "x")
        y = Polynomial.variable(P2.vars, "y")
        fwd = star_apply(star_red, P2, x, y, K=1)
        rev = star_apply(star_red, P2, y, x, K=1)
        diff = fwd[1].rational - rev[1].rational
        assert diff == P2.component(1, 2) * 2
