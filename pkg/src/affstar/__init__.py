"""Exact symbolic graph calculus for affine star products.

Wedge graphs on ordered sinks, their census, the Q[zeta(3)^2/pi^6] graded
series with the bundled seventh-order expansions, multidifferential operator
evaluation on exact polynomial Poisson structures, and certification of
associativity through Leibniz-graph factorization over Q.
"""

from .census import FilterSpec, ResourceGuard, census, generate
from .coefficients import Coefficient, ZetaDegreeError, parse_coefficient
from .factorize import (
    Certificate,
    factorize_order,
    factorize_series_order,
    reduce_modulo_leibniz,
    restriction_check,
    verify_certificate,
)
from .graphs import (
    GraphError,
    NormalForm,
    ParseError,
    SignedGraph,
    flip,
    is_zero_graph,
    normal_form,
    parse_encoding,
    prime_factorize,
    serialize,
    structure,
)
from .leibniz import LeibnizGraph, contract_edges, expand, layer_closure
from .operators import GraphSum, ZetaPolynomial, evaluate, evaluate_sum, render_formula
from .poisson import (
    Polynomial,
    PoissonStructure,
    affine_2d,
    is_poisson,
    jacobiator,
    nambu_3d,
)
from .series import (
    GraphSeries,
    associator,
    bundled_star,
    insert,
    load_star,
    save_star,
    star_apply,
)
from .weights import WeightAudit, audit, bernoulli_graph, bernoulli_number, loop_graph

__version__ = "0.1.0"
