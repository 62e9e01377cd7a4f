"""Enumeration of admissible wedge graphs modulo normal form, with filters.

Generation recurses over the aerial vertices, assigning each an unordered
target pair (the Left < Right representative of the swap orbit), and keeps
exactly the graphs that coincide with their own canonical labeling, so every
equivalence class is produced once.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import SignedGraph, is_zero_graph, normal_form, prime_factorize, structure

__all__ = ["FilterSpec", "ResourceGuard", "generate", "census", "CENSUS_ROWS"]


class ResourceGuard(RuntimeError):
    """Raised when an enumeration or solve would exceed the configured budget."""


@dataclass(frozen=True)
class FilterSpec:
    """Composable graph filters; each enabled filter only removes graphs."""

    max_aerial_in_degree: int | None = None
    require_nonzero: bool = False
    require_positive_differential_order: bool = False
    require_connected: bool = False
    prime_only: bool = False

    def admits(self, g: SignedGraph) -> bool:
        rep = structure(g)
        if (
            self.max_aerial_in_degree is not None
            and rep.max_aerial_in_degree > self.max_aerial_in_degree
        ):
            return False
        if self.require_nonzero and is_zero_graph(g):
            return False
        if self.require_positive_differential_order and (
            g.aerial == 0 or min(rep.differential_order) < 1
        ):
            return False
        if self.require_connected and not rep.connected:
            return False
        if self.prime_only and len(prime_factorize(g)) != 1:
            return False
        return True


_UNRESTRICTED_N_CAP = 5
_BOUNDED_N_CAP = 7


def generate(
    sinks: int,
    aerial: int,
    filters: FilterSpec = FilterSpec(),
    allow_large: bool = False,
) -> set[SignedGraph]:
    """All canonical graphs on ``sinks`` ground and ``aerial`` internal vertices
    passing ``filters``.  Deterministic; one representative per class."""
    if sinks not in (2, 3):
        raise ValueError(f"sink count must be 2 or 3, got {sinks}")
    bound = filters.max_aerial_in_degree
    cap = _UNRESTRICTED_N_CAP if bound is None or bound > 2 else _BOUNDED_N_CAP
    if aerial > cap and not allow_large:
        raise ResourceGuard(
            f"n={aerial} exceeds the default cap {cap} for these filters; "
            "pass allow_large to override"
        )
    if aerial == 0:
        empty = SignedGraph(sinks, ())
        return {empty} if filters.admits(empty) else set()

    m = sinks
    total = m + aerial
    pairs = list(combinations(range(total), 2))
    out: set[SignedGraph] = set()
    indeg = [0] * total
    rows: list[tuple[int, int]] = []

    def place(i: int) -> None:
        vertex = m + i
        if i == aerial:
            g = SignedGraph(m, tuple(rows), 1)
            if normal_form(g).graph.edges == g.edges and filters.admits(g):
                out.add(g)
            return
        for a, b in pairs:
            if a == vertex or b == vertex:
                continue
            if bound is not None:
                if a >= m and indeg[a] >= bound:
                    continue
                if b >= m and indeg[b] >= bound:
                    continue
            indeg[a] += 1
            indeg[b] += 1
            rows.append((a, b))
            place(i + 1)
            rows.pop()
            indeg[a] -= 1
            indeg[b] -= 1

    place(0)
    return out


#: (label, filter) rows of the census table, in print order.
CENSUS_ROWS: tuple[tuple[str, FilterSpec], ...] = (
    ("generated", FilterSpec()),
    ("nonzero", FilterSpec(require_nonzero=True)),
    (
        "nonzero, diff order > 0",
        FilterSpec(require_nonzero=True, require_positive_differential_order=True),
    ),
    (
        "nonzero, diff order > 0, connected",
        FilterSpec(
            require_nonzero=True,
            require_positive_differential_order=True,
            require_connected=True,
        ),
    ),
    (
        "  in-degree <= 2",
        FilterSpec(
            require_nonzero=True,
            require_positive_differential_order=True,
            require_connected=True,
            max_aerial_in_degree=2,
        ),
    ),
    (
        "    of them, prime (in-degree <= 2)",
        FilterSpec(
            require_nonzero=True,
            require_positive_differential_order=True,
            require_connected=True,
            max_aerial_in_degree=2,
            prime_only=True,
        ),
    ),
    (
        "  in-degree <= 1",
        FilterSpec(
            require_nonzero=True,
            require_positive_differential_order=True,
            require_connected=True,
            max_aerial_in_degree=1,
        ),
    ),
    (
        "    of them, prime (in-degree <= 1)",
        FilterSpec(
            require_nonzero=True,
            require_positive_differential_order=True,
            require_connected=True,
            max_aerial_in_degree=1,
            prime_only=True,
        ),
    ),
)


def census(
    max_n: int, sinks: int = 2, allow_large: bool = False
) -> dict[str, list[int]]:
    """Counts per census row for n = 1..max_n.

    Rows whose filters do not bound the in-degree stop at the unrestricted cap
    unless ``allow_large`` is set.
    """
    table: dict[str, list[int]] = {}
    cache: dict[int, set[SignedGraph]] = {}
    for label, filt in CENSUS_ROWS:
        counts = []
        for n in range(1, max_n + 1):
            bound = filt.max_aerial_in_degree
            cap = _UNRESTRICTED_N_CAP if bound is None or bound > 2 else _BOUNDED_N_CAP
            if n > cap and not allow_large:
                break
            key = (n, bound if bound in (1, 2) else None)
            # generate once per (n, in-degree bound) and filter in memory
            if key not in cache:
                cache[key] = generate(
                    sinks,
                    n,
                    FilterSpec(max_aerial_in_degree=key[1]),
                    allow_large=allow_large,
                )
            counts.append(sum(1 for g in cache[key] if filt.admits(g)))
        table[label] = counts
    return table


def format_census(table: dict[str, list[int]]) -> str:
    width = max(len(label) for label in table)
    lines = []
    for label, counts in table.items():
        lines.append(
            label.ljust(width) + "  " + " ".join(str(c).rjust(7) for c in counts)
        )
    return "\n".join(lines)
