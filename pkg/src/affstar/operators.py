"""Multidifferential operators attached to wedge graphs.

A graph on m sinks with components of a Poisson structure at its aerial
vertices acts on m polynomial arguments: every edge carries a summation
index, an aerial vertex contributes its component differentiated by the
indices of its incoming edges, and a sink contributes its argument
differentiated likewise.  The operator of a graph is materialized once as a
map from per-sink derivative multi-indices to exact coefficient polynomials,
so sums of many graphs collapse before any argument is touched.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .coefficients import Coefficient, ZETA_SYMBOL
from .graphs import SignedGraph, normal_form, serialize
from .poisson import PoissonStructure, Polynomial, with_context

__all__ = [
    "GraphSum",
    "ZetaPolynomial",
    "evaluate",
    "evaluate_sum",
    "operator_map",
    "render_formula",
]


@dataclass(frozen=True)
class ZetaPolynomial:
    """Polynomial with coefficients in Q[zeta(3)^2/pi^6], split by slice."""

    rational: Polynomial
    zeta: Polynomial

    @property
    def is_zero(self) -> bool:
        return self.rational.is_zero and self.zeta.is_zero

    def __add__(self, other: "ZetaPolynomial") -> "ZetaPolynomial":
        return ZetaPolynomial(
            self.rational + other.rational, self.zeta + other.zeta
        )

    def __eq__(self, other):
        return self.rational == other.rational and self.zeta == other.zeta

    def __str__(self):
        if self.zeta.is_zero:
            return str(self.rational)
        text = f"({self.zeta})*{ZETA_SYMBOL}"
        if not self.rational.is_zero:
            text += f" + {self.rational}"
        return text


class GraphSum:
    """Formal Q[zeta]-linear combination of canonical graphs on shared sinks."""

    __slots__ = ("sinks", "terms")

    def __init__(self, sinks: int, terms=None):
        self.sinks = sinks
        self.terms: dict[SignedGraph, Coefficient] = {}
        if terms:
            for g, c in dict(terms).items():
                self.add(g, c)

    def add(self, g: SignedGraph, c) -> None:
        """Accumulate c * g, normalizing g and folding its sign into c."""
        if g.sinks != self.sinks:
            raise ValueError(f"sink count mismatch: {g.sinks} != {self.sinks}")
        c = Coefficient.of(c)
        if not c:
            return
        nf = normal_form(g)
        if nf.applied_sign == 0:
            return
        key = nf.graph
        total = self.terms.get(key, Coefficient()) + c * nf.applied_sign
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "GraphSum") -> "GraphSum":
        out = GraphSum(self.sinks, self.terms)
        for g, c in other.terms.items():
            out.add(g, c)
        return out

    def scaled(self, c) -> "GraphSum":
        c = Coefficient.of(c)
        out = GraphSum(self.sinks)
        for g, old in self.terms.items():
            out.add(g, old * c)
        return out

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return self.sinks == other.sinks and self.terms == other.terms

    def sorted_terms(self) -> list[tuple[SignedGraph, Coefficient]]:
        return sorted(self.terms.items(), key=lambda t: t[0].encoding_key())

    def tri_differential_slices(self) -> dict[tuple[int, ...], "GraphSum"]:
        """Split by the tuple of sink in-degrees (differential orders)."""
        slices: dict[tuple[int, ...], GraphSum] = {}
        for g, c in self.terms.items():
            order = g.in_degrees()[: self.sinks]
            slices.setdefault(order, GraphSum(self.sinks)).terms[g] = c
        return slices

    def slice_parts(self) -> tuple["GraphSum", "GraphSum"]:
        """(rational slice, zeta slice) as graph sums with rational coefficients."""
        rat, zet = GraphSum(self.sinks), GraphSum(self.sinks)
        for g, c in self.terms.items():
            if c.rational:
                rat.terms[g] = Coefficient(c.rational)
            if c.zeta:
                zet.terms[g] = Coefficient(c.zeta)
        return rat, zet


# --- evaluation --------------------------------------------------------------


@lru_cache(maxsize=None)
def _component_derivative(P: PoissonStructure, i: int, j: int, names: tuple[str, ...]):
    poly = P.component(i, j)
    for v in names:
        poly = poly.diff(v)
    return poly


@lru_cache(maxsize=None)
def _nonzero_pairs(P: PoissonStructure) -> tuple[tuple[int, int], ...]:
    pairs = []
    for i in range(1, P.dim + 1):
        for j in range(1, P.dim + 1):
            if i != j and not P.component(i, j).is_zero:
                pairs.append((i, j))
    return tuple(pairs)


@lru_cache(maxsize=None)
def operator_map(g: SignedGraph, P: PoissonStructure):
    """dict: per-sink derivative multi-indices -> coefficient Polynomial.

    Multi-indices are sorted tuples of 1-based coordinate indices.  The
    graph's sign multiplies every entry; no zero-graph shortcut is taken.
    """
    m, n = g.sinks, g.aerial
    if g.sign == 0:
        return {}
    if n == 0:
        one = Polynomial.constant(P.vars, g.sign)
        return {((),) * m: one}
    # cheap skip: a doubly-differentiated affine component vanishes
    indegs = g.in_degrees()
    if P.is_affine and max(indegs[m:]) >= 2:
        return {}

    incoming: list[list[tuple[int, int]]] = [[] for _ in range(m + n)]
    for i, (a, b) in enumerate(g.edges):
        incoming[a].append((i, 0))
        incoming[b].append((i, 1))

    pairs = _nonzero_pairs(P)
    out: dict[tuple, Polynomial] = {}
    for choice in product(pairs, repeat=n):
        factor = Polynomial.constant(P.vars, g.sign)
        ok = True
        for v in range(n):
            idxs = tuple(
                sorted(choice[src][side] for src, side in incoming[m + v])
            )
            names = tuple(P.coords[t - 1] for t in idxs)
            poly = _component_derivative(P, choice[v][0], choice[v][1], names)
            if poly.is_zero:
                ok = False
                break
            factor = factor * poly
        if not ok:
            continue
        key = tuple(
            tuple(sorted(choice[src][side] for src, side in incoming[s]))
            for s in range(m)
        )
        prev = out.get(key)
        out[key] = factor if prev is None else prev + factor
    return {k: p for k, p in out.items() if not p.is_zero}


def _apply_entries(entries, P, args) -> Polynomial:
    total = Polynomial.zero(P.vars)
    derivative_cache: dict[tuple[int, tuple[int, ...]], Polynomial] = {}
    for key, poly in entries.items():
        prod_poly = poly
        for s, midx in enumerate(key):
            cached = derivative_cache.get((s, midx))
            if cached is None:
                cached = args[s]
                for t in midx:
                    cached = cached.diff(P.coords[t - 1])
                derivative_cache[(s, midx)] = cached
            if cached.is_zero:
                prod_poly = None
                break
            prod_poly = prod_poly * cached
        if prod_poly is not None:
            total = total + prod_poly
    return total


def _lift_args(P: PoissonStructure, args) -> list[Polynomial]:
    lifted = []
    for a in args:
        if a.vars != P.vars:
            a = with_context(a, P.vars)
        lifted.append(a)
    return lifted


def evaluate(g: SignedGraph, P: PoissonStructure, args) -> Polynomial:
    """Exact value of the graph's operator on polynomial arguments."""
    if len(args) != g.sinks:
        raise ValueError(f"need {g.sinks} arguments, got {len(args)}")
    args = _lift_args(P, args)
    return _apply_entries(operator_map(g, P), P, args)


def evaluate_sum(S: GraphSum, P: PoissonStructure, args) -> ZetaPolynomial:
    """Q[zeta]-linear extension of evaluate; graphs are collapsed first."""
    if len(args) != S.sinks:
        raise ValueError(f"need {S.sinks} arguments, got {len(args)}")
    args = _lift_args(P, args)
    collected: dict[tuple, tuple[Polynomial, Polynomial]] = {}
    zero = Polynomial.zero(P.vars)
    for g, c in S.terms.items():
        for key, poly in operator_map(g, P).items():
            rat, zet = collected.get(key, (zero, zero))
            if c.rational:
                rat = rat + poly * c.rational
            if c.zeta:
                zet = zet + poly * c.zeta
            collected[key] = (rat, zet)
    rat_entries = {k: r for k, (r, _) in collected.items() if not r.is_zero}
    zeta_entries = {k: z for k, (_, z) in collected.items() if not z.is_zero}
    return ZetaPolynomial(
        _apply_entries(rat_entries, P, args),
        _apply_entries(zeta_entries, P, args),
    )


# --- rendering ---------------------------------------------------------------

_PLAIN_LETTERS = ["i", "j", "k", "ℓ", "m", "n", "p", "q", "r", "s", "t", "u", "v", "w"]
_LATEX_LETTERS = ["i", "j", "k", "{\\ell}", "m", "n", "p", "q", "r", "s", "t", "u", "v", "w"]
_ARG_NAMES = ["f", "g", "h"]


def _coefficient_text(c: Coefficient, latex: bool) -> str:
    if c.zeta:
        return f"({c})"
    q = c.rational
    if latex:
        sign = "-" if q < 0 else ""
        q = abs(q)
        if q.denominator == 1:
            return f"{sign}{q.numerator}"
        return f"{sign}\\tfrac{{{q.numerator}}}{{{q.denominator}}}"
    return str(q)


def _render_term(g: SignedGraph, c: Coefficient, latex: bool) -> str:
    m = g.sinks
    letters = _LATEX_LETTERS if latex else _PLAIN_LETTERS
    partial = "\\partial_" if latex else "∂_"
    psym = "\\mathcal{P}^" if latex else "P^"

    order = sorted(range(g.aerial), key=lambda i: (g.edges[i], i))
    letter_of: dict[tuple[int, int], str] = {}
    for pos, vi in enumerate(order):
        letter_of[(vi, 0)] = letters[2 * pos]
        letter_of[(vi, 1)] = letters[2 * pos + 1]
    rank: dict[tuple[int, int], int] = {
        edge: 2 * pos + side
        for pos, vi in enumerate(order)
        for side, edge in enumerate([(vi, 0), (vi, 1)])
    }

    incoming: dict[int, list[tuple[int, int]]] = {}
    for i, (a, b) in enumerate(g.edges):
        incoming.setdefault(a, []).append((i, 0))
        incoming.setdefault(b, []).append((i, 1))

    def dels(target: int) -> str:
        edges = sorted(incoming.get(target, []), key=lambda e: rank[e], reverse=True)
        if latex:
            return "".join(f"{partial}{{{letter_of[e]}}} " for e in edges)
        return "".join(f"{partial}{letter_of[e]} " for e in edges)

    factors = []
    for vi in order:
        a = letter_of[(vi, 0)]
        b = letter_of[(vi, 1)]
        factors.append(f"{dels(m + vi)}{psym}{{{a}{b}}}")
    for s in range(m):
        factors.append(f"{dels(s)}{_ARG_NAMES[s]}")
    body = " ".join(factors)

    if c == Coefficient(1):
        return body
    if c == Coefficient(-1):
        return "-" + body
    return f"{_coefficient_text(c, latex)} {body}"


def render_formula(S: GraphSum, latex: bool = False) -> str:
    """One summand per line, graphs in canonical order; index letters follow
    the printed vertex order (vertices sorted by their target pair)."""
    if S.sinks > 3:
        raise ValueError("rendering supports 2- or 3-sink sums")
    lines = [_render_term(g, c, latex) for g, c in S.sorted_terms()]
    return "\n".join(lines)
