"""Certificates expressing graph sums through the Jacobi identity.

Every homogeneous slice of an associator is matched against the span of
Leibniz-graph expansions by exact linear algebra: the rational and zeta
slices form two systems over Q sharing one matrix.  When the 0th layer of
Leibniz graphs (edge contractions of the target) does not suffice, the
contract/expand iteration supplies further layers until a solution exists,
saturation, or the layer budget runs out.  The stats trace records the
counts exactly as ``aK -> +bL -> +cK ...``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .census import ResourceGuard
from .coefficients import Coefficient, parse_coefficient
from .graphs import SignedGraph
from .leibniz import LeibnizGraph, contract_edges, expand, parse_leibniz, serialize_leibniz
from .linalg import ColumnEchelon
from .operators import GraphSum, evaluate_sum
from .poisson import PoissonStructure, Polynomial, is_poisson
from .series import GraphSeries, associator

__all__ = [
    "Certificate",
    "factorize_order",
    "factorize_series_order",
    "verify_certificate",
    "reduce_modulo_leibniz",
    "restriction_check",
    "save_certificate",
    "load_certificate",
]

log = logging.getLogger(__name__)


@dataclass
class Certificate:
    """A solved (or failed) factorization of one homogeneous slice."""

    tri_order: tuple[int, ...]
    h_order: int | None
    layers_used: int
    assignments: dict[LeibnizGraph, Coefficient]
    stats: list[str]
    solved: bool
    affine: bool = True

    def trace(self) -> str:
        body = " -> ".join(self.stats)
        if not self.tri_order:
            return body
        head = "(" + ", ".join(str(d) for d in self.tri_order) + ")"
        return f"{head}: {body}"

    def trace_with_verdict(self) -> str:
        return f"{self.trace()}\n{self.solved}"


def _expansion_column(L: LeibnizGraph, affine: bool) -> dict[SignedGraph, Fraction]:
    col = {}
    for g, c in expand(L, affine_filter=affine).terms.items():
        if c.zeta:
            raise AssertionError("expansion coefficients must be rational")
        col[g] = c.rational
    return col


def factorize_order(
    target: GraphSum,
    max_layers: int = 1,
    tri_order: tuple[int, ...] | None = None,
    h_order: int | None = None,
    affine: bool = True,
    column_cap: int = 200_000,
) -> Certificate:
    """Realize ``target`` as a Q[zeta]-combination of Leibniz-graph expansions.

    Layers are exhausted in order: the solver only admits layer k+1 once
    layer k failed to produce a consistent system.
    """
    if tri_order is None:
        if target.terms:
            tri_order = next(iter(target.terms)).in_degrees()[: target.sinks]
        else:
            tri_order = (0,) * target.sinks
    if not target.terms:
        return Certificate(tri_order, h_order, 0, {}, ["0K"], True, affine)

    rat_rhs: dict[SignedGraph, Fraction] = {}
    zeta_rhs: dict[SignedGraph, Fraction] = {}
    for g, c in target.terms.items():
        if c.rational:
            rat_rhs[g] = c.rational
        if c.zeta:
            zeta_rhs[g] = c.zeta

    echelon = ColumnEchelon()
    columns: list[LeibnizGraph] = []
    known_k: set[SignedGraph] = set(target.terms)
    known_l: set[LeibnizGraph] = set()
    frontier: set[SignedGraph] = set(known_k)
    stats = [f"{len(target)}K"]
    layer = 0

    while True:
        l_new: set[LeibnizGraph] = set()
        for g in frontier:
            l_new |= contract_edges(g)
        l_new -= known_l
        known_l |= l_new
        stats.append(f"+{len(l_new)}L")

        k_new: set[SignedGraph] = set()
        ordered = sorted(l_new, key=LeibnizGraph.encoding_key)
        for L in ordered:
            k_new |= set(expand(L, affine_filter=affine).terms)
        k_new -= known_k
        known_k |= k_new
        stats.append(f"+{len(k_new)}K")
        if len(known_k) + len(known_l) > column_cap:
            raise ResourceGuard(
                f"factorization at {tri_order} exceeded {column_cap} graphs"
            )
        for L in ordered:
            echelon.add_column(_expansion_column(L, affine), L)
            columns.append(L)

        x_rat = echelon.solve(rat_rhs)
        x_zeta = echelon.solve(zeta_rhs) if zeta_rhs else {}
        if x_rat is not None and x_zeta is not None:
            assignments: dict[LeibnizGraph, Coefficient] = {}
            for L in columns:
                c = Coefficient(x_rat.get(L, 0), x_zeta.get(L, 0))
                if c:
                    assignments[L] = c
            return Certificate(
                tri_order, h_order, layer, assignments, stats, True, affine
            )
        if not l_new or layer >= max_layers:
            return Certificate(tri_order, h_order, layer, {}, stats, False, affine)
        frontier = k_new
        layer += 1


def _factorize_job(args) -> Certificate:
    target, max_layers, order, k, affine = args
    return factorize_order(target, max_layers, tri_order=order, h_order=k, affine=affine)


def factorize_series_order(
    star: GraphSeries,
    k: int,
    max_layers: int = 1,
    affine: bool = True,
    tri_order: tuple[int, int, int] | None = None,
    workers: int = 1,
) -> list[Certificate]:
    """Factorize every tri-differential component of the order-k associator.

    Components are independent jobs; with workers > 1 they run in a process
    pool and merge in canonical order, so the result never depends on timing.
    """
    A = associator(star, k, affine_filter=affine)
    slices = A[k].tri_differential_slices()
    orders = sorted(slices) if tri_order is None else [tuple(tri_order)]
    jobs = [
        (slices.get(order, GraphSum(3)), max_layers, order, k, affine)
        for order in orders
    ]
    if workers > 1 and len(jobs) > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            return pool.map(_factorize_job, jobs)
    return [_factorize_job(job) for job in jobs]


def verify_certificate(cert: Certificate, target: GraphSum) -> bool:
    """Re-expand the assignments exactly and compare with the target."""
    total = GraphSum(target.sinks)
    for L, c in cert.assignments.items():
        total = total + expand(L, affine_filter=cert.affine).scaled(c)
    return total == target


def reduce_modulo_leibniz(
    star2: GraphSeries,
    max_aerial: int | None = None,
    max_layers: int = 1,
    extended: bool = False,
) -> tuple[GraphSeries, dict[int, Certificate]]:
    """Canonical residue of every order of a 2-sink series modulo the span of
    2-sink Leibniz expansions reachable by the layer iteration.

    Orders 0 and 1 carry no internal edges and stay untouched.  Orders 6 and
    7 are large; they run only with the extended flag.
    """
    if star2.sinks != 2:
        raise ValueError("reduction needs a 2-sink series")
    top = star2.order if max_aerial is None else min(max_aerial, star2.order)
    if top >= 6 and not extended:
        raise ResourceGuard(
            "reduction beyond order 5 is an extended run; pass extended=True"
        )
    reduced = GraphSeries(star2.sinks, star2.order)
    used: dict[int, Certificate] = {}
    for k in range(star2.order + 1):
        source = star2[k]
        if k > top or k < 2 or not source.terms:
            reduced.terms[k] = GraphSum(2, source.terms)
            continue
        echelon = ColumnEchelon()
        known_l: set[LeibnizGraph] = set()
        frontier: set[SignedGraph] = set(source.terms)
        known_k = set(frontier)
        stats = [f"{len(source)}K"]
        columns: list[LeibnizGraph] = []
        for layer in range(max_layers + 1):
            l_new: set[LeibnizGraph] = set()
            for g in frontier:
                l_new |= contract_edges(g)
            l_new -= known_l
            known_l |= l_new
            stats.append(f"+{len(l_new)}L")
            k_new: set[SignedGraph] = set()
            ordered = sorted(l_new, key=LeibnizGraph.encoding_key)
            for L in ordered:
                k_new |= set(expand(L, affine_filter=True).terms)
                echelon.add_column(_expansion_column(L, True), L)
                columns.append(L)
            k_new -= known_k
            known_k |= k_new
            stats.append(f"+{len(k_new)}K")
            frontier = k_new
            if not l_new:
                break

        rat_rhs = {g: c.rational for g, c in source.terms.items() if c.rational}
        zeta_rhs = {g: c.zeta for g, c in source.terms.items() if c.zeta}
        res_rat, combo_rat = echelon.residue(rat_rhs)
        res_zeta, combo_zeta = echelon.residue(zeta_rhs)
        out = GraphSum(2)
        for g, c in res_rat.items():
            out.add(g, Coefficient(c))
        for g, c in res_zeta.items():
            out.add(g, Coefficient(0, c))
        reduced.terms[k] = out
        assignments: dict[LeibnizGraph, Coefficient] = {}
        for L in columns:
            c = Coefficient(-combo_rat.get(L, 0), -combo_zeta.get(L, 0))
            if c:
                assignments[L] = c
        used[k] = Certificate(
            (), k, max(len(stats) // 2 - 1, 0), assignments, stats, True, True
        )
    return reduced, used


def restriction_check(
    star2: GraphSeries,
    P: PoissonStructure,
    K: int,
    arg_degree: int,
) -> bool:
    """True iff the associator vanishes identically on all monomial argument
    triples up to the given degree, at every order <= K."""
    if not P.is_affine:
        raise ValueError("restriction check expects an affine structure")
    if not is_poisson(P):
        raise ValueError("structure fails the Jacobi identity")
    A = associator(star2, K, affine_filter=True)
    monomials = _monomials(P, arg_degree)
    for k in range(K + 1):
        if not _vanishes_on(A[k], P, monomials):
            log.warning("associator order %d does not vanish", k)
            return False
    return True


def _monomials(P: PoissonStructure, degree: int) -> list[Polynomial]:
    from itertools import product as iproduct

    out = []
    d = len(P.coords)
    for exps in iproduct(range(degree + 1), repeat=d):
        if sum(exps) <= degree:
            exp = tuple(exps) + (0,) * len(P.params)
            out.append(Polynomial(P.vars, {exp: Fraction(1)}))
    return out


def _vanishes_on(S: GraphSum, P: PoissonStructure, monomials) -> bool:
    from .operators import _apply_entries, operator_map

    collected_rat: dict = {}
    collected_zeta: dict = {}
    zero = Polynomial.zero(P.vars)
    for g, c in S.terms.items():
        for key, poly in operator_map(g, P).items():
            if c.rational:
                collected_rat[key] = collected_rat.get(key, zero) + poly * c.rational
            if c.zeta:
                collected_zeta[key] = collected_zeta.get(key, zero) + poly * c.zeta
    collected_rat = {k: p for k, p in collected_rat.items() if not p.is_zero}
    collected_zeta = {k: p for k, p in collected_zeta.items() if not p.is_zero}
    if not collected_rat and not collected_zeta:
        return True
    from itertools import product as iproduct

    for args in iproduct(monomials, repeat=S.sinks):
        for entries in (collected_rat, collected_zeta):
            if entries and not _apply_entries(entries, P, list(args)).is_zero:
                return False
    return True


# --- certificate files --------------------------------------------------------


def save_certificate(cert: Certificate, graphs_path, coeffs_path) -> None:
    """Leibniz encodings in one file, coefficients line-parallel in the other."""
    items = sorted(cert.assignments.items(), key=lambda t: t[0].encoding_key())
    Path(graphs_path).write_text(
        "".join(serialize_leibniz(L) + "\n" for L, _ in items)
    )
    Path(coeffs_path).write_text("".join(f"{c}\n" for _, c in items))


def load_certificate(
    graphs_path, coeffs_path, tri_order=(), h_order=None
) -> Certificate:
    graph_lines = Path(graphs_path).read_text().splitlines()
    coeff_lines = Path(coeffs_path).read_text().splitlines()
    if len(graph_lines) != len(coeff_lines):
        raise ValueError("certificate files differ in length")
    assignments = {
        parse_leibniz(g): parse_coefficient(c)
        for g, c in zip(graph_lines, coeff_lines)
        if g.strip()
    }
    return Certificate(
        tuple(tri_order), h_order, 0, assignments, [], True
    )
