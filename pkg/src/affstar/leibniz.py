"""Graphs with one trident vertex standing for the Jacobi identity.

A Leibniz graph has ordered sinks, wedge aerial vertices, and one
distinguished trident vertex carrying an ordered triple of targets.  Its
expansion replaces the trident by two wedges over the three cyclic
assignments and spreads incoming arrows by the Leibniz rule; the result sums
to zero on every Poisson structure, so these graphs encode differential
consequences of the Jacobi identity.  Contracting an internal edge of a
wedge graph produces the trident candidates, and iterating
contraction/expansion builds the layers used by the factorizer.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .graphs import GraphError, SignedGraph, normal_form
from .operators import GraphSum

__all__ = [
    "LeibnizGraph",
    "expand",
    "contract_edges",
    "layer_closure",
    "LayerReport",
    "enumerate_leibniz",
    "parse_leibniz",
    "serialize_leibniz",
]

_CYCLIC = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True)
class LeibnizGraph:
    """Trident vertex (label ``sinks``) plus wedge vertices (labels above it).

    Affine bounds hold by construction: in-degree of the trident at most 2,
    of every wedge top at most 1.
    """

    sinks: int
    trident: tuple[int, int, int]
    wedges: tuple[tuple[int, int], ...]
    sign: int = 1

    def __post_init__(self):
        m = self.sinks
        if m not in (2, 3):
            raise GraphError(f"Leibniz graphs live on 2 or 3 sinks, got {m}")
        if self.sign not in (-1, 0, 1):
            raise GraphError(f"sign must be -1, 0 or 1, got {self.sign}")
        total = m + 1 + len(self.wedges)
        if len(set(self.trident)) != 3:
            raise GraphError("trident targets must be pairwise distinct")
        for t in self.trident:
            if not 0 <= t < total:
                raise GraphError(f"trident target {t} out of range")
            if t == m:
                raise GraphError("trident tadpole")
        for i, (a, b) in enumerate(self.wedges):
            v = m + 1 + i
            if a == b:
                raise GraphError(f"wedge {v}: double edge")
            for t in (a, b):
                if not 0 <= t < total:
                    raise GraphError(f"wedge {v}: target {t} out of range")
                if t == v:
                    raise GraphError(f"wedge {v}: tadpole")
        degs = self.in_degrees()
        if degs[m] > 2:
            raise GraphError(f"trident in-degree {degs[m]} exceeds 2")
        for v in range(m + 1, total):
            if degs[v] > 1:
                raise GraphError(f"wedge {v}: in-degree {degs[v]} exceeds 1")

    @property
    def aerial(self) -> int:
        return 1 + len(self.wedges)

    def in_degrees(self) -> tuple[int, ...]:
        total = self.sinks + self.aerial
        degs = [0] * total
        for t in self.trident:
            degs[t] += 1
        for a, b in self.wedges:
            degs[a] += 1
            degs[b] += 1
        return tuple(degs)

    def encoding_key(self) -> tuple[int, ...]:
        return (
            (self.sinks, self.aerial, self.sign)
            + self.trident
            + tuple(t for pair in self.wedges for t in pair)
        )

    def __str__(self) -> str:
        return serialize_leibniz(self)


def serialize_leibniz(L: LeibnizGraph) -> str:
    """`m n s  t1 t2 t3  pairs...` with the trident triple first."""
    head = f"{L.sinks} {L.aerial} {L.sign}"
    trident = " ".join(str(t) for t in L.trident)
    if not L.wedges:
        return f"{head}  {trident}"
    pairs = " ".join(f"{a} {b}" for a, b in L.wedges)
    return f"{head}  {trident}  {pairs}"


def parse_leibniz(text: str) -> LeibnizGraph:
    tokens = text.split()
    if len(tokens) < 6:
        raise GraphError("need at least 'm n s  t1 t2 t3'")
    m, n, s = int(tokens[0]), int(tokens[1]), int(tokens[2])
    if len(tokens) != 6 + 2 * (n - 1):
        raise GraphError(
            f"expected {6 + 2 * (n - 1)} tokens for {n} aerial vertices, got {len(tokens)}"
        )
    trident = (int(tokens[3]), int(tokens[4]), int(tokens[5]))
    rest = [int(t) for t in tokens[6:]]
    wedges = tuple((rest[2 * i], rest[2 * i + 1]) for i in range(n - 1))
    return LeibnizGraph(m, trident, wedges, s)


def _perm_sign(seq) -> int:
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def canonical_leibniz(L: LeibnizGraph) -> tuple[LeibnizGraph, int]:
    """Canonical representative (sign +1) and the sign relating L to it.

    The trident is color-distinguished: only wedge vertices are relabeled.
    The trident triple is sorted (each transposition flips the sign, matching
    the total antisymmetry of the Jacobi obstruction), wedge rows are
    oriented Left < Right, and the wedge row list read from the highest label
    down is minimized.  Sign 0 marks a sign-reversing self-mapping.
    """
    m = L.sinks
    k = len(L.wedges)
    best = None
    signs: set[int] = set()
    for perm in itertools.permutations(range(k)):
        inv = [0] * k
        for old, new in enumerate(perm):
            inv[new] = old

        def relab(t):
            return m + 1 + perm[t - m - 1] if t > m else t

        triple = sorted(relab(t) for t in L.trident)
        tsign = _perm_sign([relab(t) for t in L.trident])
        rows = []
        swaps = 0
        for j in range(k):
            a, b = (relab(t) for t in L.wedges[inv[j]])
            if a > b:
                a, b = b, a
                swaps ^= 1
            rows.append((a, b))
        key = tuple(triple) + tuple(x for pair in reversed(rows) for x in pair)
        sgn = tsign * (1 - 2 * swaps)
        if best is None or key < best[0]:
            best = (key, tuple(triple), tuple(rows))
            signs = {sgn}
        elif key == best[0]:
            signs.add(sgn)
    triple, rows = best[1], best[2]
    canon = LeibnizGraph(m, triple, rows, 1)
    if len(signs) == 2 or L.sign == 0:
        return canon, 0
    return canon, signs.pop() * L.sign


def expand(L: LeibnizGraph, affine_filter: bool = False) -> GraphSum:
    """Kontsevich-graph expansion of the trident.

    For each cyclic assignment (i, j, k) of the trident targets, the trident
    becomes a wedge pair u -> (t_i, w), w -> (t_j, t_k); arrows that entered
    the trident are spread over u and w in all ways.  Every term carries +1
    relative to the graph's sign.  With ``affine_filter`` the terms whose
    aerial in-degree exceeds 1 (zero operators on affine brackets) are
    dropped.
    """
    m = L.sinks
    out = GraphSum(m)
    if L.sign == 0:
        return out
    k = len(L.wedges)
    # new aerial labels: u = m, w = m + 1, old wedge v -> v + 1
    shift = {m + 1 + i: m + 2 + i for i in range(k)}

    incoming_slots = [
        (i, side)
        for i, pair in enumerate(L.wedges)
        for side, t in enumerate(pair)
        if t == m
    ]

    for cyc in _CYCLIC:
        t_i, t_j, t_k = (L.trident[c] for c in cyc)
        u_row = (shift.get(t_i, t_i), m + 1)
        w_row = (shift.get(t_j, t_j), shift.get(t_k, t_k))
        base_rows = [
            [shift.get(t, t) if t != m else None for t in pair] for pair in L.wedges
        ]
        for assign in itertools.product((m, m + 1), repeat=len(incoming_slots)):
            rows = [list(r) for r in base_rows]
            for (i, side), target in zip(incoming_slots, assign):
                rows[i][side] = target
            edges = (u_row, w_row) + tuple(tuple(r) for r in rows)
            try:
                g = SignedGraph(m, edges, L.sign)
            except GraphError:
                continue
            if affine_filter:
                degs = g.in_degrees()
                if max(degs[m:], default=0) > 1:
                    continue
            out.add(g, 1)
    return out


def contract_edges(K: SignedGraph) -> set[LeibnizGraph]:
    """All ways to merge one aerial edge v -> w into a trident, canonically.

    Candidates with tadpoles, repeated trident targets, or in-degrees beyond
    the affine bounds are discarded; sign-symmetric (zero) candidates are
    dropped since their expansions cancel identically.
    """
    m = K.sinks
    out: set[LeibnizGraph] = set()
    for vi, (va, vb) in enumerate(K.edges):
        v = m + vi
        for side, w in enumerate(((va, vb))):
            if w < m:
                continue
            v_other = (vb, va)[side]
            wi = w - m
            wa, wb = K.edges[wi]
            if v in (wa, wb) or v_other == w:
                # the reverse edge would become a tadpole after the merge
                continue
            if v_other in (wa, wb):
                continue
            rest = [idx for idx in range(K.aerial) if idx not in (vi, wi)]
            relab = {m + old: m + 1 + new for new, old in enumerate(rest)}
            relab[v] = m
            relab[w] = m

            def mp(t):
                return relab.get(t, t)

            triple = (mp(v_other), mp(wa), mp(wb))
            if len(set(triple)) != 3 or m in triple:
                continue
            wedges = tuple(
                (mp(K.edges[idx][0]), mp(K.edges[idx][1])) for idx in rest
            )
            try:
                cand = LeibnizGraph(m, triple, wedges, 1)
            except GraphError:
                continue
            canon, sign = canonical_leibniz(cand)
            if sign != 0:
                out.add(canon)
    return out


@dataclass(frozen=True)
class LayerReport:
    leibniz_new: frozenset[LeibnizGraph]
    kontsevich_new: frozenset[SignedGraph]


def layer_closure(
    seed: Iterable[SignedGraph], max_layers: int, affine_filter: bool = True
) -> list[LayerReport]:
    """Iterated contract/expand layers starting from canonical seed graphs.

    Layer 0 contracts the seed; each next layer contracts only the graphs
    newly produced by expanding the previous layer.  Stops at saturation or
    after ``max_layers`` layers have been produced.
    """
    k_all: set[SignedGraph] = set()
    for g in seed:
        k_all.add(normal_form(g).graph)
    l_all: set[LeibnizGraph] = set()
    frontier = set(k_all)
    reports: list[LayerReport] = []
    for _ in range(max_layers + 1):
        l_new: set[LeibnizGraph] = set()
        for g in frontier:
            l_new |= contract_edges(g)
        l_new -= l_all
        if not l_new and reports:
            break
        l_all |= l_new
        k_new: set[SignedGraph] = set()
        for L in l_new:
            k_new |= set(expand(L, affine_filter=affine_filter).terms)
        k_new -= k_all
        k_all |= k_new
        frontier = k_new
        reports.append(LayerReport(frozenset(l_new), frozenset(k_new)))
        if not l_new and not k_new:
            break
    return reports


def enumerate_leibniz(
    sinks: int, aerial: int, allow_large: bool = False
) -> set[LeibnizGraph]:
    """All canonical Leibniz graphs with the given sink and aerial counts."""
    if aerial < 1:
        raise ValueError("need at least the trident vertex")
    if aerial > 4 and not allow_large:
        from .census import ResourceGuard

        raise ResourceGuard(f"Leibniz universe at n={aerial} is large; override to run")
    m = sinks
    total = m + aerial
    out: set[LeibnizGraph] = set()
    labels = [t for t in range(total) if t != m]
    for triple in itertools.combinations(labels, 3):
        for wedge_targets in itertools.product(
            itertools.combinations(range(total), 2), repeat=aerial - 1
        ):
            try:
                cand = LeibnizGraph(m, triple, tuple(wedge_targets), 1)
            except GraphError:
                continue
            canon, sign = canonical_leibniz(cand)
            if sign != 0:
                out.add(canon)
    return out
