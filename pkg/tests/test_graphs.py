import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affstar.graphs import (
    GraphError,
    ParseError,
    SignedGraph,
    flip,
    graph_product,
    is_zero_graph,
    normal_form,
    parse_encoding,
    prime_factorize,
    serialize,
    structure,
)


@st.composite
def graphs(draw, sinks=2, max_aerial=4):
    n = draw(st.integers(min_value=0, max_value=max_aerial))
    edges = []
    for i in range(n):
        vertex = sinks + i
        candidates = [t for t in range(sinks + n) if t != vertex]
        pair = draw(st.permutations(candidates))[:2]
        edges.append(tuple(pair))
    sign = draw(st.sampled_from([-1, 1]))
    return SignedGraph(sinks, tuple(edges), sign)


class TestParseSerialize:
    def test_wedge_line(self):
        g = parse_encoding("2 2 1   0 1 0 1")
        assert g.sinks == 2 and g.aerial == 2
        assert g.edges == ((0, 1), (0, 1)) and g.sign == 1

    def test_empty_graph(self):
        g = parse_encoding("2 0 1")
        assert g.aerial == 0
        assert serialize(g) == "2 0 1"

    def test_double_edge_rejected(self):
        with pytest.raises(GraphError, match="double edge"):
            parse_encoding("2 1 1   0 0")

    def test_tadpole_rejected(self):
        with pytest.raises(GraphError, match="tadpole"):
            parse_encoding("2 1 1   2 0")

    def test_out_of_range_target(self):
        with pytest.raises(GraphError, match="out of range"):
            parse_encoding("2 1 1   0 5")

    def test_malformed_token_count(self):
        with pytest.raises(ParseError, match="tokens"):
            parse_encoding("2 2 1   0 1 0")

    def test_negative_sign_roundtrip(self):
        g = parse_encoding("2 1 -1   0 1")
        assert g.sign == -1
        assert serialize(g) == "2 1 -1   0 1"

    @given(graphs())
    def test_roundtrip(self, g):
        assert parse_encoding(serialize(g)) == g


class TestNormalForm:
    def test_wedge_swap(self):
        nf = normal_form(parse_encoding("2 1 1   1 0"))
        assert serialize(nf.graph) == "2 1 1   0 1"
        assert nf.applied_sign == -1

    def test_chain_two_vertices(self):
        nf = normal_form(parse_encoding("2 2 1   0 1 2 1"))
        assert serialize(nf.graph) == "2 2 1   1 3 0 1"
        assert nf.applied_sign == -1

    def test_idempotent(self):
        g = parse_encoding("2 3 1   1 3 0 4 0 1")
        nf = normal_form(g)
        again = normal_form(nf.graph)
        assert again.graph == nf.graph and again.applied_sign == 1

    @given(graphs(max_aerial=3), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_soundness_under_relabeling_and_swaps(self, g, rng):
        """Relabeled/swapped copies share the canonical graph; the applied
        signs differ by (-1)^swaps."""
        n = g.aerial
        perm = list(range(n))
        rng.shuffle(perm)
        relabel = {g.sinks + i: g.sinks + perm[i] for i in range(n)}
        rows = [None] * n
        swap_count = 0
        for i, pair in enumerate(g.edges):
            pair = tuple(relabel.get(t, t) for t in pair)
            if rng.random() < 0.5:
                pair = (pair[1], pair[0])
                swap_count += 1
            rows[perm[i]] = pair
        other = SignedGraph(g.sinks, tuple(rows), g.sign)
        nf1, nf2 = normal_form(g), normal_form(other)
        assert nf1.graph == nf2.graph
        if nf1.applied_sign != 0:
            assert nf2.applied_sign == nf1.applied_sign * (-1) ** swap_count
        else:
            assert nf2.applied_sign == 0

    @given(graphs(max_aerial=4))
    @settings(max_examples=60, deadline=None)
    def test_zero_consistency(self, g):
        assert is_zero_graph(g) == (normal_form(g).applied_sign == 0)


class TestZeroGraphs:
    def test_wedge_not_zero(self):
        assert not is_zero_graph(parse_encoding("2 1 1   0 1"))

    def test_symmetric_apex_is_zero(self):
        # apex aiming at two interchangeable wedges
        g = parse_encoding("2 3 1   3 4 0 1 0 1")
        assert is_zero_graph(g)


class TestFlip:
    def test_wedge_flip(self):
        flipped = flip(parse_encoding("2 1 1   0 1"))
        assert serialize(flipped) == "2 1 1   1 0"
        nf = normal_form(flipped)
        assert serialize(nf.graph) == "2 1 1   0 1" and nf.applied_sign == -1

    def test_rejects_three_sinks(self):
        with pytest.raises(GraphError):
            flip(SignedGraph(3, ((0, 1),)))

    @given(graphs(max_aerial=4))
    def test_involution(self, g):
        assert flip(flip(g)) == g

    @given(graphs(max_aerial=3))
    @settings(max_examples=40, deadline=None)
    def test_preserves_zeroness(self, g):
        assert is_zero_graph(flip(g)) == is_zero_graph(g)


class TestStructure:
    def test_wedge(self):
        rep = structure(parse_encoding("2 1 1   0 1"))
        assert rep.differential_order == (1, 1)
        assert rep.connected and not rep.eye_on_ground
        assert rep.max_aerial_in_degree == 0

    def test_eye_on_ground(self):
        # mutual 2-cycle on vertices 2, 3 sharing sink 0, apex feeding vertex 3
        g = SignedGraph(2, ((0, 3), (0, 2), (1, 3)))
        rep = structure(g)
        assert rep.eye_on_ground

    def test_eye_without_shared_sink(self):
        rep = structure(parse_encoding("2 2 1   1 3 0 2"))
        assert not rep.eye_on_ground
        assert rep.in_degrees[2:] == (1, 1)
        assert rep.differential_order == (1, 1)

    def test_chain_in_degrees(self):
        rep = structure(parse_encoding("2 2 1   1 3 0 2"))
        assert rep.in_degrees == (1, 1, 1, 1)

    def test_disconnected_purely_aerial_component(self):
        # vertices 3, 4, 5 form a component detached from the sinks
        g = SignedGraph(2, ((0, 1), (4, 5), (3, 5), (3, 4)))
        assert not structure(g).connected


class TestPrimeFactorize:
    def test_double_wedge(self):
        factors = prime_factorize(parse_encoding("2 2 1   0 1 0 1"))
        assert len(factors) == 2
        assert all(serialize(f) == "2 1 1   0 1" for f in factors)

    def test_connected_graph_is_single_factor(self):
        g = normal_form(parse_encoding("2 2 1   1 3 0 1")).graph
        assert prime_factorize(g) == [g]

    def test_empty_graph(self):
        assert prime_factorize(parse_encoding("2 0 1")) == []

    @given(graphs(max_aerial=4))
    @settings(max_examples=60, deadline=None)
    def test_product_reassembles(self, g):
        factors = prime_factorize(g)
        assert sum(f.aerial for f in factors) == g.aerial
        product = graph_product(factors)
        assert normal_form(product).graph == normal_form(g).graph
