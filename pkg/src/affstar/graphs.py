"""Directed wedge graphs on ordered sinks: encoding, normal forms, structure.

A graph lives on ``m`` ground vertices (sinks), labeled ``0..m-1``, and ``n``
aerial vertices labeled ``m..m+n-1``.  Every aerial vertex emits an ordered
pair of edges (Left, Right) to two distinct other vertices; sinks emit
nothing.  The plain-text encoding is

    m n s   t1L t1R t2L t2R ... tnL tnR

with the sign s in {-1, 0, 1}.  Swapping the (Left, Right) order at one
vertex flips the sign of the object the graph stands for; relabeling aerial
vertices does not.  Sinks are ordered and are never permuted here; exchanging
the two sinks is the separate operation :func:`flip`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "SignedGraph",
    "NormalForm",
    "StructureReport",
    "GraphError",
    "ParseError",
    "parse_encoding",
    "serialize",
    "normal_form",
    "is_zero_graph",
    "flip",
    "structure",
    "prime_factorize",
    "graph_product",
]


class GraphError(ValueError):
    """Invalid graph data (bad target, tadpole, double edge, wrong sink count)."""


class ParseError(GraphError):
    """Malformed encoding text; the message names the offending field."""


@dataclass(frozen=True)
class SignedGraph:
    """A wedge graph on ordered sinks together with a sign in {-1, 0, +1}."""

    sinks: int
    edges: tuple[tuple[int, int], ...]
    sign: int = 1

    def __post_init__(self) -> None:
        m = self.sinks
        if m < 1:
            raise GraphError(f"sink count must be >= 1, got {m}")
        if self.sign not in (-1, 0, 1):
            raise GraphError(f"sign must be -1, 0 or 1, got {self.sign}")
        total = m + len(self.edges)
        for i, (left, right) in enumerate(self.edges):
            vertex = m + i
            for t in (left, right):
                if not 0 <= t < total:
                    raise GraphError(
                        f"vertex {vertex}: target {t} out of range [0, {total})"
                    )
            if left == vertex or right == vertex:
                raise GraphError(f"vertex {vertex}: tadpole")
            if left == right:
                raise GraphError(f"vertex {vertex}: double edge to {left}")

    @property
    def aerial(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return self.sinks + len(self.edges)

    def in_degrees(self) -> tuple[int, ...]:
        degs = [0] * self.n_vertices
        for left, right in self.edges:
            degs[left] += 1
            degs[right] += 1
        return tuple(degs)

    def encoding_key(self) -> tuple[int, ...]:
        """Flat integer tuple (m, n, s, targets...) used for deterministic order."""
        return (self.sinks, len(self.edges), self.sign) + tuple(
            t for pair in self.edges for t in pair
        )

    def __lt__(self, other: "SignedGraph") -> bool:
        return self.encoding_key() < other.encoding_key()

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class NormalForm:
    """Canonical representative (sign +1) plus the sign relating the input to it."""

    graph: SignedGraph
    applied_sign: int


@dataclass(frozen=True)
class StructureReport:
    in_degrees: tuple[int, ...]
    differential_order: tuple[int, ...]
    connected: bool
    eye_on_ground: bool
    max_aerial_in_degree: int


def parse_encoding(text: str) -> SignedGraph:
    """Parse one encoding line; any run of blanks separates tokens."""
    tokens = text.split()
    if len(tokens) < 3:
        raise ParseError(f"need at least 'm n s', got {len(tokens)} tokens")
    try:
        m, n, s = (int(tokens[k]) for k in range(3))
    except ValueError as exc:
        raise ParseError(f"header 'm n s' not integer: {exc}") from None
    if n < 0:
        raise ParseError(f"aerial count must be >= 0, got {n}")
    if len(tokens) != 3 + 2 * n:
        raise ParseError(
            f"expected {3 + 2 * n} tokens for n={n} target pairs, got {len(tokens)}"
        )
    try:
        targets = [int(t) for t in tokens[3:]]
    except ValueError as exc:
        raise ParseError(f"target not integer: {exc}") from None
    edges = tuple((targets[2 * i], targets[2 * i + 1]) for i in range(n))
    return SignedGraph(m, edges, s)


def serialize(g: SignedGraph) -> str:
    """Inverse of :func:`parse_encoding`; triple space before the target list."""
    head = f"{g.sinks} {g.aerial} {g.sign}"
    if not g.edges:
        return head
    return head + "   " + " ".join(f"{a} {b}" for a, b in g.edges)


# --- canonical form ---------------------------------------------------------
#
# The canonical labeling minimizes, over all relabelings of aerial vertices
# combined with all Left/Right swaps, the target list read from the highest
# aerial vertex down to the lowest (each swap contributes -1).  Reading the
# rows from the top pins e.g. the chain on two aerial vertices to the
# labeling "1 3 0 1" rather than "0 1 1 2".

_PERM_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _perm_arrays(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(perm, inv, parity) arrays over S_n; perm[k, old] = new label index."""
    cached = _PERM_CACHE.get(n)
    if cached is not None:
        return cached
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    inv = np.empty_like(perms)
    rows = np.arange(len(perms))[:, None]
    inv[rows, perms] = np.arange(n)[None, :]
    # parity kept for completeness; relabelings carry no sign
    parity = np.zeros(len(perms), dtype=np.int64)
    _PERM_CACHE[n] = (perms, inv, parity)
    return _PERM_CACHE[n]


def _canonicalize(m: int, edges: tuple[tuple[int, int], ...]) -> tuple[
    tuple[tuple[int, int], ...], int, bool
]:
    """Return (canonical rows, sign of reaching them, zero flag) for one orbit.

    The sign is the swap parity of the minimizing relabeling; the zero flag
    is set when the minimum is reached with both parities, i.e. the graph has
    a sign-reversing self-mapping.
    """
    n = len(edges)
    if n == 0:
        return (), 1, False
    if n <= 4:
        return _canonicalize_small(m, edges)
    return _canonicalize_np(m, edges)


def _canonicalize_small(m, edges):
    n = len(edges)
    best_key = None
    best_rows = None
    signs: set[int] = set()
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        rows = []
        swaps = 0
        for j in range(n):
            a, b = edges[inv[j]]
            if a >= m:
                a = m + perm[a - m]
            if b >= m:
                b = m + perm[b - m]
            if a > b:
                a, b = b, a
                swaps ^= 1
            rows.append((a, b))
        key = tuple(x for pair in reversed(rows) for x in pair)
        if best_key is None or key < best_key:
            best_key = key
            best_rows = tuple(rows)
            signs = {1 - 2 * swaps}
        elif key == best_key:
            signs.add(1 - 2 * swaps)
    return best_rows, (1 if 1 in signs else -1), len(signs) == 2


def _canonicalize_np(m, edges):
    n = len(edges)
    perms, inv, _ = _perm_arrays(n)
    rows = np.array(edges, dtype=np.int64)          # (n, 2), old-label order
    permuted = rows[inv]                            # (K, n, 2): row j = old inv[k, j]
    aer = permuted - m
    is_aer = aer >= 0
    flat = np.take_along_axis(
        perms, np.where(is_aer, aer, 0).reshape(len(perms), -1), axis=1
    ).reshape(permuted.shape)
    relabeled = np.where(is_aer, flat + m, permuted)
    lo = relabeled.min(axis=2)
    hi = relabeled.max(axis=2)
    swaps = (relabeled[:, :, 0] > relabeled[:, :, 1]).sum(axis=1) & 1
    key = np.empty((len(perms), 2 * n), dtype=np.int64)
    key[:, 0::2] = lo[:, ::-1]
    key[:, 1::2] = hi[:, ::-1]
    order = np.lexsort(key.T[::-1])
    kmin = key[order[0]]
    mask = (key == kmin).all(axis=1)
    parities = set((swaps[mask] & 1).tolist())
    rows_min = [
        (int(kmin[2 * (n - 1 - j)]), int(kmin[2 * (n - 1 - j) + 1])) for j in range(n)
    ]
    zero = len(parities) == 2
    sign = 1 if 0 in parities else -1
    return tuple(rows_min), sign, zero


_NF_CACHE: dict[tuple[int, tuple[tuple[int, int], ...]], tuple] = {}


def _orbit_data(m: int, edges: tuple[tuple[int, int], ...]):
    key = (m, edges)
    hit = _NF_CACHE.get(key)
    if hit is None:
        hit = _canonicalize(m, edges)
        _NF_CACHE[key] = hit
    return hit


def normal_form(g: SignedGraph) -> NormalForm:
    """Canonical representative plus the sign relating ``g`` to it.

    The applied sign is 0 exactly when the underlying graph has a symmetry
    realizable with a net odd number of wedge swaps (a zero graph), or when
    ``g`` itself carries sign 0.
    """
    rows, sign, zero = _orbit_data(g.sinks, g.edges)
    canon = SignedGraph(g.sinks, rows, 1)
    if zero or g.sign == 0:
        return NormalForm(canon, 0)
    return NormalForm(canon, sign * g.sign)


def is_zero_graph(g: SignedGraph) -> bool:
    """True iff some aerial relabeling plus wedge swaps maps g to itself with net sign -1."""
    return _orbit_data(g.sinks, g.edges)[2]


def flip(g: SignedGraph) -> SignedGraph:
    """Exchange the two sinks in every edge target (2-sink graphs only)."""
    if g.sinks != 2:
        raise GraphError(f"flip needs exactly 2 sinks, got {g.sinks}")
    swap = {0: 1, 1: 0}
    edges = tuple(
        (swap.get(a, a), swap.get(b, b)) for a, b in g.edges
    )
    return SignedGraph(2, edges, g.sign)


def structure(g: SignedGraph) -> StructureReport:
    degs = g.in_degrees()
    m = g.sinks
    eye = False
    targets = {m + i: set(pair) for i, pair in enumerate(g.edges)}
    for i, pair in enumerate(g.edges):
        v = m + i
        for w in pair:
            if w >= m and v in targets[w] and targets[v] & targets[w] & set(range(m)):
                eye = True
    return StructureReport(
        in_degrees=degs,
        differential_order=degs[:m],
        connected=_spanning_connected(g),
        eye_on_ground=eye,
        max_aerial_in_degree=max(degs[m:], default=0),
    )


def _spanning_connected(g: SignedGraph) -> bool:
    total = g.n_vertices
    if total == 1:
        return True
    adj: list[set[int]] = [set() for _ in range(total)]
    for i, (a, b) in enumerate(g.edges):
        v = g.sinks + i
        for t in (a, b):
            adj[v].add(t)
            adj[t].add(v)
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == total


def _aerial_components(g: SignedGraph) -> list[list[int]]:
    """Connected components of the aerial vertices (edges through sinks ignored)."""
    m, n = g.sinks, g.aerial
    adj: list[set[int]] = [set() for _ in range(n)]
    for i, (a, b) in enumerate(g.edges):
        for t in (a, b):
            if t >= m:
                adj[i].add(t - m)
                adj[t - m].add(i)
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            for u in adj[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def prime_factorize(g: SignedGraph) -> list[SignedGraph]:
    """Split a 2-sink graph into its prime factors over the shared sinks.

    Factors are the aerial components, each returned on the same two sinks in
    canonical form; the empty graph yields the empty list.
    """
    if g.sinks != 2:
        raise GraphError(f"prime factorization needs 2 sinks, got {g.sinks}")
    factors = []
    for comp in _aerial_components(g):
        relabel = {g.sinks + old: g.sinks + new for new, old in enumerate(comp)}
        edges = tuple(
            tuple(relabel.get(t, t) for t in g.edges[old]) for old in comp
        )
        factors.append(normal_form(SignedGraph(2, edges, 1)).graph)
    factors.sort(key=SignedGraph.encoding_key)
    return factors


def graph_product(factors: Iterable[SignedGraph]) -> SignedGraph:
    """Stack 2-sink graphs over shared sinks (inverse of prime_factorize up to NF)."""
    factors = list(factors)
    if any(f.sinks != 2 for f in factors):
        raise GraphError("graph product is defined for 2-sink graphs")
    edges: list[tuple[int, int]] = []
    offset = 0
    for f in factors:
        shift = {2 + i: 2 + offset + i for i in range(f.aerial)}
        edges.extend(tuple(shift.get(t, t) for t in pair) for pair in f.edges)
        offset += f.aerial
    sign = 1
    for f in factors:
        sign *= f.sign
    return SignedGraph(2, tuple(edges), sign)
