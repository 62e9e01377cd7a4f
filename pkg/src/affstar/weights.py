"""Closed-form weight constraints and consistency audits of star-product data.

The bundled coefficient of a canonical graph with n aerial vertices relates
to the normalized graph weight w by the factor N(n) = 2^n * n!.  That factor
is calibrated on n = 1, 2 and then genuinely predicts the chain and cycle
families at n = 4, 6, which the audits check, along with the sign rule under
sink exchange, weight multiplicativity over prime factors, and the absence
of zero or disconnected graphs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .coefficients import Coefficient
from .graphs import (
    SignedGraph,
    flip,
    graph_product,
    is_zero_graph,
    normal_form,
    prime_factorize,
    serialize,
    structure,
)
from .series import GraphSeries

__all__ = [
    "WeightAudit",
    "bernoulli_number",
    "bernoulli_graph",
    "loop_graph",
    "coefficient_normalization",
    "audit",
]


@dataclass
class WeightAudit:
    relation: str
    order: int
    violations: list[tuple[SignedGraph, Coefficient, Coefficient]] = field(
        default_factory=list
    )

    @property
    def passed(self) -> bool:
        return not self.violations

    def report_lines(self) -> list[str]:
        if self.passed:
            return [f"{self.relation} order {self.order}: ok"]
        return [
            f"{self.relation} {self.order} {serialize(g)} expected {want} found {got}"
            for g, want, got in self.violations
        ]


_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]


def bernoulli_number(n: int) -> Fraction:
    """Bernoulli number with the B_1 = +1/2 convention, by the defining recursion."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_BERNOULLI_CACHE) <= n:
        m = len(_BERNOULLI_CACHE)
        # sum_{k=0}^{m} C(m+1, k) B_k^- = 0 gives the minus convention
        total = Fraction(0)
        for k in range(m):
            total += _binom(m + 1, k) * _BERNOULLI_CACHE[k] * (-1 if k == 1 else 1)
        value = -total / (m + 1)
        # flip back into the plus convention for B_1
        _BERNOULLI_CACHE.append(-value if m == 1 else value)
    return _BERNOULLI_CACHE[n]


def _binom(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k))


def bernoulli_graph(n: int) -> SignedGraph:
    """Chain family: wedges (2,0),(2,1) then (k+3,k+2),(k+3,1) for k < n-1."""
    if n < 1:
        raise ValueError("chain graphs start at n = 1")
    edges = [(0, 1)] + [(k + 2, 1) for k in range(n - 1)]
    return SignedGraph(2, tuple(edges), 1)


def loop_graph(n: int) -> SignedGraph:
    """Cycle family: wedges (2,0),(2,1+n) then (k+3,k+2),(k+3,1) for k < n-1."""
    if n < 2:
        raise ValueError("cycle graphs start at n = 2")
    edges = [(0, 1 + n)] + [(k + 2, 1) for k in range(n - 1)]
    return SignedGraph(2, tuple(edges), 1)


def coefficient_normalization(n: int) -> Fraction:
    """N(n) = 2^n * n!, relating bundled coefficients to normalized weights."""
    return Fraction(2**n * factorial(n))


def _series_coefficient(series: GraphSeries, g: SignedGraph) -> Coefficient:
    nf = normal_form(g)
    if nf.applied_sign == 0:
        return Coefficient()
    c = series[g.aerial].terms.get(nf.graph, Coefficient())
    return c * nf.applied_sign


def audit(series: GraphSeries) -> list[WeightAudit]:
    """Run the four read-only audits on a 2-sink series; violations are
    collected, never raised."""
    if series.sinks != 2:
        raise ValueError("audits apply to 2-sink series")
    audits = []
    for k in range(series.order + 1):
        audits.append(_audit_flip(series, k))
        audits.append(_audit_multiplicativity(series, k))
        audits.append(_audit_forbidden(series, k))
    audits.extend(_audit_families(series))
    return audits


def _audit_flip(series: GraphSeries, k: int) -> WeightAudit:
    out = WeightAudit("flip", k)
    sign = (-1) ** k
    for g, c in series[k].terms.items():
        want = c * sign
        got = _series_coefficient(series, flip(g))
        if got != want:
            out.violations.append((g, want, got))
    return out


def _audit_multiplicativity(series: GraphSeries, k: int) -> WeightAudit:
    out = WeightAudit("multiplicativity", k)
    for g, c in series[k].terms.items():
        factors = prime_factorize(g)
        if len(factors) < 2:
            continue
        product = Coefficient(1)
        counts: dict[SignedGraph, int] = {}
        for f in factors:
            counts[f] = counts.get(f, 0) + 1
            product = product * _series_coefficient(series, f)
        for mult in counts.values():
            product = product * Fraction(1, factorial(mult))
        reassembled = normal_form(graph_product(factors))
        want = product * reassembled.applied_sign
        # the reassembled normal form is the stored graph itself
        if reassembled.graph != g or want != c:
            out.violations.append((g, want, c))
    return out


def _audit_forbidden(series: GraphSeries, k: int) -> WeightAudit:
    out = WeightAudit("zero/disconnected absent", k)
    for g, c in series[k].terms.items():
        if k > 0 and (is_zero_graph(g) or not structure(g).connected):
            out.violations.append((g, Coefficient(), c))
    return out


def _audit_families(series: GraphSeries) -> list[WeightAudit]:
    """|coeff| of the chain graph is N(n) |B_n| / (n!)^2; the cycle graph
    carries half that."""
    audits = []
    for k in range(1, series.order + 1):
        out = WeightAudit("chain/cycle weights", k)
        base = coefficient_normalization(k) * abs(bernoulli_number(k)) / factorial(k) ** 2
        targets = [(bernoulli_graph(k), base)]
        if k >= 2:
            targets.append((loop_graph(k), base / 2))
        for g, want_abs in targets:
            got = _series_coefficient(series, g)
            want = Coefficient(want_abs)
            if abs(got.rational) != want_abs or got.zeta:
                out.violations.append((normal_form(g).graph, want, got))
        audits.append(out)
    return audits
