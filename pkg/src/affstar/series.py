"""Graded graph series, the star-product file format, insertion, associators.

A series stores one graph sum per power of the deformation parameter h.  The
file format alternates ``h^k:`` headers with ``encoding    coefficient``
lines; graphs are normalized on load with their signs folded into the
coefficients, and saving emits the canonical layout, so load(save(x)) = x.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .coefficients import Coefficient, parse_coefficient
from .graphs import GraphError, SignedGraph, normal_form, parse_encoding, serialize
from .operators import GraphSum, ZetaPolynomial, evaluate_sum
from .poisson import PoissonStructure, Polynomial

__all__ = [
    "GraphSeries",
    "load_star",
    "save_star",
    "loads_star",
    "dumps_star",
    "bundled_star",
    "insert",
    "associator",
    "star_apply",
    "Coefficient",
    "parse_coefficient",
]

log = logging.getLogger(__name__)

WEDGE = SignedGraph(2, ((0, 1),))
EMPTY = SignedGraph(2, ())


@dataclass
class GraphSeries:
    """Truncated power series in h with a GraphSum at every order 0..order."""

    sinks: int
    order: int
    terms: dict[int, GraphSum] = field(default_factory=dict)

    def __post_init__(self):
        for k in range(self.order + 1):
            self.terms.setdefault(k, GraphSum(self.sinks))
        for k, s in self.terms.items():
            if s.sinks != self.sinks:
                raise ValueError("sink count mismatch in series term")
            for g in s.terms:
                if g.aerial != k:
                    raise GraphError(
                        f"order {k} holds a graph with {g.aerial} aerial vertices"
                    )

    def __getitem__(self, k: int) -> GraphSum:
        return self.terms.setdefault(k, GraphSum(self.sinks))

    def nonzero_count(self) -> int:
        return sum(len(s) for s in self.terms.values())

    def truncated(self, order: int) -> "GraphSeries":
        return GraphSeries(
            self.sinks, order, {k: self.terms[k] for k in range(order + 1)}
        )

    def __eq__(self, other):
        return (
            self.sinks == other.sinks
            and self.order == other.order
            and all(self[k] == other[k] for k in range(self.order + 1))
        )


def loads_star(text: str) -> GraphSeries:
    sinks = None
    order = -1
    terms: dict[int, GraphSum] = {}
    current: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("h^") and line.endswith(":"):
            current = int(line[2:-1])
            order = max(order, current)
            continue
        if current is None:
            raise ValueError(f"line {lineno}: graph line before any 'h^k:' header")
        tokens = line.split()
        try:
            n = int(tokens[1])
        except (IndexError, ValueError):
            raise ValueError(f"line {lineno}: malformed encoding") from None
        enc_tokens = 3 + 2 * n
        if len(tokens) != enc_tokens + 1:
            raise ValueError(
                f"line {lineno}: expected encoding plus one coefficient"
            )
        g = parse_encoding(" ".join(tokens[:enc_tokens]))
        c = parse_coefficient(tokens[enc_tokens])
        if sinks is None:
            sinks = g.sinks
        if g.sinks != sinks:
            raise ValueError(f"line {lineno}: sink count changed")
        if g.aerial != current:
            raise ValueError(
                f"line {lineno}: graph has {g.aerial} aerial vertices under h^{current}"
            )
        target = terms.setdefault(current, GraphSum(sinks))
        nf = normal_form(g)
        if nf.graph in target.terms:
            log.warning(
                "duplicate graph %s at order %d; summing coefficients",
                serialize(nf.graph),
                current,
            )
        target.add(g, c)
    if sinks is None:
        raise ValueError("no graph lines found")
    return GraphSeries(sinks, order, terms)


def dumps_star(series: GraphSeries) -> str:
    lines = []
    for k in range(series.order + 1):
        lines.append(f"h^{k}:")
        for g, c in series[k].sorted_terms():
            lines.append(f"{serialize(g)}    {c}")
    return "\n".join(lines) + "\n"


def load_star(path) -> GraphSeries:
    return loads_star(Path(path).read_text())


def save_star(series: GraphSeries, path) -> None:
    Path(path).write_text(dumps_star(series))


def bundled_star(name: str) -> GraphSeries:
    """Load a star product shipped with the package: 'aff' or 'aff_red'."""
    fname = {"aff": "star_aff.txt", "aff_red": "star_aff_red.txt"}.get(name)
    if fname is None:
        raise ValueError(f"unknown bundled star product {name!r}")
    text = resources.files("affstar.data").joinpath(fname).read_text()
    return loads_star(text)


# --- insertion and the associator --------------------------------------------


def insert(host: SignedGraph, sink_index: int, guest: SignedGraph) -> GraphSum:
    """Splice ``guest`` into a sink of ``host``, spreading redirected edges by
    the Leibniz rule over every guest vertex (sinks included).

    Sink order of the result: (guest 0, guest 1, other host sink) when
    inserting at sink 0, and (other host sink, guest 0, guest 1) at sink 1.
    Every term enters with coefficient +1 before normalization.
    """
    if host.sinks != 2 or guest.sinks != 2:
        raise GraphError("insertion is defined for 2-sink graphs")
    if sink_index not in (0, 1):
        raise GraphError(f"sink index must be 0 or 1, got {sink_index}")
    other = 1 - sink_index
    ng, nh = guest.aerial, host.aerial

    if sink_index == 0:
        guest_sink_map = {0: 0, 1: 1}
        other_sink_new = 2
    else:
        guest_sink_map = {0: 1, 1: 2}
        other_sink_new = 0
    guest_aerial = {2 + i: 3 + i for i in range(ng)}
    host_aerial = {2 + i: 3 + ng + i for i in range(nh)}
    guest_vertices = [guest_sink_map[0], guest_sink_map[1]] + [
        guest_aerial[2 + i] for i in range(ng)
    ]

    base_guest = tuple(
        tuple(guest_aerial[t] if t >= 2 else guest_sink_map[t] for t in pair)
        for pair in guest.edges
    )

    redirect_slots: list[tuple[int, int]] = []
    host_rows: list[list[int]] = []
    for i, pair in enumerate(host.edges):
        row = []
        for side, t in enumerate(pair):
            if t == sink_index:
                redirect_slots.append((i, side))
                row.append(-1)
            elif t == other:
                row.append(other_sink_new)
            else:
                row.append(host_aerial[t])
        host_rows.append(row)

    out = GraphSum(3)
    sign = host.sign * guest.sign
    if sign == 0:
        return out

    def fill(slot: int) -> None:
        if slot == len(redirect_slots):
            rows = base_guest + tuple(tuple(r) for r in host_rows)
            try:
                g = SignedGraph(3, rows, sign)
            except GraphError:
                return
            out.add(g, 1)
            return
        i, side = redirect_slots[slot]
        for target in guest_vertices:
            host_rows[i][side] = target
            fill(slot + 1)
        host_rows[i][side] = -1

    fill(0)
    return out


def _filter_affine(S: GraphSum) -> GraphSum:
    out = GraphSum(S.sinks)
    for g, c in S.terms.items():
        degs = g.in_degrees()
        if max(degs[g.sinks:], default=0) <= 1:
            out.terms[g] = c
    return out


def associator(star: GraphSeries, K: int, affine_filter: bool = True) -> GraphSeries:
    """(f*g)*h - f*(g*h) as a 3-sink series through order K.

    With the affine filter, graphs acquiring an aerial in-degree above 1 are
    dropped at creation time (they act by zero on affine structures).
    """
    if star.sinks != 2:
        raise ValueError("associator needs a 2-sink series")
    if star.order < K:
        raise ValueError(f"series truncated at {star.order}, need {K}")
    result = GraphSeries(3, K)
    for k in range(K + 1):
        acc = GraphSum(3)
        for p in range(k + 1):
            q = k - p
            for host, ch in star[p].terms.items():
                for guest, cg in star[q].terms.items():
                    c = ch * cg
                    left = insert(host, 0, guest)
                    right = insert(host, 1, guest)
                    if affine_filter:
                        left = _filter_affine(left)
                        right = _filter_affine(right)
                    acc = acc + left.scaled(c) + right.scaled(-c)
        result.terms[k] = acc
    return result


def star_apply(
    star: GraphSeries,
    P: PoissonStructure,
    f: Polynomial,
    g: Polynomial,
    K: int | None = None,
) -> list[ZetaPolynomial]:
    """Per-order values of f * g under the series, orders 0..K."""
    if K is None:
        K = star.order
    if K > star.order:
        raise ValueError(f"series truncated at {star.order}, need {K}")
    return [evaluate_sum(star[k], P, [f, g]) for k in range(K + 1)]
