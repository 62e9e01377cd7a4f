import pytest

from affstar.census import CENSUS_ROWS, FilterSpec, ResourceGuard, census, generate
from affstar.graphs import normal_form, serialize

# row label -> counts for n = 1..4
TABLE_SMALL = {
    "generated": [1, 6, 44, 475],
    "nonzero": [1, 6, 38, 445],
    "nonzero, diff order > 0": [1, 4, 30, 331],
    "nonzero, diff order > 0, connected": [1, 4, 30, 330],
    "  in-degree <= 2": [1, 4, 30, 265],
    "    of them, prime (in-degree <= 2)": [1, 3, 24, 215],
    "  in-degree <= 1": [1, 4, 14, 51],
    "    of them, prime (in-degree <= 1)": [1, 3, 8, 23],
}


@pytest.fixture(scope="module")
def table4():
    return census(4)


def test_census_n_up_to_4(table4):
    for label, counts in TABLE_SMALL.items():
        assert table4[label] == counts, label


def test_wedge_is_the_single_order_one_graph():
    got = generate(2, 1)
    assert len(got) == 1
    assert serialize(next(iter(got))) == "2 1 1   0 1"


def test_zero_graph_count_at_three_vertices():
    generated = generate(2, 3)
    nonzero = generate(2, 3, FilterSpec(require_nonzero=True))
    assert len(generated) - len(nonzero) == 6


def test_no_zero_graphs_at_two_vertices():
    assert len(generate(2, 2)) == len(generate(2, 2, FilterSpec(require_nonzero=True)))


def test_in_degree_one_rows_at_n5():
    base = FilterSpec(
        max_aerial_in_degree=1,
        require_nonzero=True,
        require_positive_differential_order=True,
        require_connected=True,
    )
    assert len(generate(2, 5, base)) == 161
    prime = FilterSpec(
        max_aerial_in_degree=1,
        require_nonzero=True,
        require_positive_differential_order=True,
        require_connected=True,
        prime_only=True,
    )
    assert len(generate(2, 5, prime)) == 59


def test_empty_graph_conventions():
    assert len(generate(2, 0)) == 1
    assert len(generate(2, 0, FilterSpec(require_positive_differential_order=True))) == 0


def test_filters_are_monotone(table4):
    previous = None
    for label in (
        "generated",
        "nonzero",
        "nonzero, diff order > 0",
        "nonzero, diff order > 0, connected",
    ):
        counts = table4[label]
        if previous is not None:
            assert all(a <= b for a, b in zip(counts, previous))
        previous = counts


def test_generation_is_deterministic_and_canonical():
    a = generate(2, 3)
    b = generate(2, 3)
    assert a == b
    for g in a:
        nf = normal_form(g)
        assert nf.graph == g
        # canonical representative; zero graphs carry applied sign 0
        assert nf.applied_sign in (0, 1)
    nonzero = generate(2, 3, FilterSpec(require_nonzero=True))
    assert all(normal_form(g).applied_sign == 1 for g in nonzero)


def test_resource_guard():
    with pytest.raises(ResourceGuard):
        generate(2, 6)


def test_sink_count_validation():
    with pytest.raises(ValueError):
        generate(4, 1)
