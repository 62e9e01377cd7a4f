"""Exact multivariate polynomials over Q and concrete Poisson structures.

Polynomials carry a fixed, ordered variable tuple (coordinates first, then
formal parameters) and store sparse exponent vectors with Fraction
coefficients.  "Vanishes for all parameter values" is decided as "is the zero
polynomial", so bracket identities hold identically in the parameters.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

__all__ = [
    "Polynomial",
    "PoissonStructure",
    "JacobiatorTensor",
    "affine_2d",
    "nambu_3d",
    "generic_poly",
    "with_context",
    "merge_contexts",
    "jacobiator",
    "is_poisson",
    "parse_polynomial",
]


class Polynomial:
    """Sparse exact polynomial: dict from exponent tuple to nonzero Fraction."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: tuple[str, ...], terms: dict | None = None):
        self.vars = tuple(variables)
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(exp)] = c

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables, value) -> "Polynomial":
        value = Fraction(value)
        p = cls(variables)
        if value:
            p.terms[(0,) * len(p.vars)] = value
        return p

    @classmethod
    def variable(cls, variables, name) -> "Polynomial":
        variables = tuple(variables)
        idx = variables.index(name)
        exp = [0] * len(variables)
        exp[idx] = 1
        return cls(variables, {tuple(exp): Fraction(1)})

    # -- ring operations ------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, 0) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        out = Polynomial(self.vars)
        out.terms = terms
        return out

    def __neg__(self):
        out = Polynomial(self.vars)
        out.terms = {exp: -c for exp, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            out = Polynomial(self.vars)
            if other:
                out.terms = {exp: c * other for exp, c in self.terms.items()}
            return out
        self._check(other)
        out = Polynomial(self.vars)
        terms = out.terms
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exp, 0) + c1 * c2
                if s:
                    terms[exp] = s
                else:
                    terms.pop(exp, None)
        return out

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def diff(self, name: str) -> "Polynomial":
        idx = self.vars.index(name)
        out = Polynomial(self.vars)
        for exp, c in self.terms.items():
            k = exp[idx]
            if k:
                new = list(exp)
                new[idx] = k - 1
                out.terms[tuple(new)] = c * k
        return out

    def degree(self, names: tuple[str, ...] | None = None) -> int:
        """Total degree, optionally restricted to a subset of variables."""
        if not self.terms:
            return -1
        if names is None:
            idxs = range(len(self.vars))
        else:
            idxs = [self.vars.index(v) for v in names]
        return max(sum(exp[i] for i in idxs) for exp in self.terms)

    def substitute(self, values: dict) -> "Polynomial":
        """Replace variables by Fractions; unreplaced variables stay formal."""
        out = Polynomial.zero(self.vars)
        for exp, c in self.terms.items():
            coeff = c
            new = list(exp)
            for name, val in values.items():
                idx = self.vars.index(name)
                coeff *= Fraction(val) ** exp[idx]
                new[idx] = 0
            out = out + Polynomial(self.vars, {tuple(new): coeff})
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            factors = [
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(self.vars, exp)
                if k
            ]
            if not factors:
                body = str(abs(c))
            else:
                mon = " ".join(factors)
                body = mon if abs(c) == 1 else f"{abs(c)}*{mon}"
            bits.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(bits)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__


_TERM_RE = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_polynomial(text: str, variables: tuple[str, ...]) -> Polynomial:
    """Parse 'c * x^a y^b' sums; inverse of str() on its own output."""
    out = Polynomial.zero(variables)
    text = text.strip()
    if not text or text == "0":
        return out
    for sign, chunk in _TERM_RE.findall(text):
        chunk = chunk.strip()
        if not chunk:
            continue
        coeff = Fraction(-1 if sign == "-" else 1)
        exp = [0] * len(variables)
        for factor in chunk.replace("*", " ").split():
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
                continue
            mm = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(\d+))?", factor)
            if not mm:
                raise ValueError(f"bad monomial factor {factor!r}")
            name, power = mm.group(1), int(mm.group(2) or 1)
            if name not in variables:
                raise ValueError(f"unknown variable {name!r}")
            exp[variables.index(name)] += power
        out = out + Polynomial(variables, {tuple(exp): coeff})
    return out


@dataclass(frozen=True)
class PoissonStructure:
    """Antisymmetric matrix of polynomials; components stored for i < j, 1-based."""

    dim: int
    coords: tuple[str, ...]
    params: tuple[str, ...]
    upper: tuple[tuple[tuple[int, int], Polynomial], ...]

    @property
    def vars(self) -> tuple[str, ...]:
        return self.coords + self.params

    def component(self, i: int, j: int) -> Polynomial:
        if not (1 <= i <= self.dim and 1 <= j <= self.dim):
            raise ValueError(f"index out of range: ({i}, {j})")
        if i == j:
            return Polynomial.zero(self.vars)
        table = dict(self.upper)
        if i < j:
            return table.get((i, j), Polynomial.zero(self.vars))
        return -table.get((j, i), Polynomial.zero(self.vars))

    @property
    def is_affine(self) -> bool:
        return all(p.degree(self.coords) <= 1 for _, p in self.upper)


def _build(dim, coords, params, comps: dict) -> PoissonStructure:
    upper = tuple(sorted((ij, p) for ij, p in comps.items() if not p.is_zero))
    return PoissonStructure(dim, tuple(coords), tuple(params), upper)


def affine_2d() -> PoissonStructure:
    """P^{12} = alpha*x + beta*y + gamma with formal parameters."""
    coords = ("x", "y")
    params = ("alpha", "beta", "gamma")
    v = coords + params
    p12 = (
        Polynomial.variable(v, "alpha") * Polynomial.variable(v, "x")
        + Polynomial.variable(v, "beta") * Polynomial.variable(v, "y")
        + Polynomial.variable(v, "gamma")
    )
    return _build(2, coords, params, {(1, 2): p12})


_EPS3 = {
    (1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
    (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1,
}


def nambu_3d(rho: Polynomial, a: Polynomial) -> PoissonStructure:
    """P^{ij} = rho * eps^{ijk} d_k(a) on R^3 with coordinates x, y, z."""
    coords = ("x", "y", "z")
    if rho.vars != a.vars:
        raise ValueError("rho and a must share one variable context")
    for c in coords:
        if c not in rho.vars:
            raise ValueError(f"variable context must contain coordinate {c!r}")
    params = tuple(v for v in rho.vars if v not in coords)
    if rho.vars[: len(coords)] != coords:
        raise ValueError("variable context must list x, y, z first")
    comps = {}
    for i, j in combinations((1, 2, 3), 2):
        k = ({1, 2, 3} - {i, j}).pop()
        comps[(i, j)] = rho * a.diff(coords[k - 1]) * _EPS3[(i, j, k)]
    return _build(3, coords, params, comps)


def generic_poly(degree: int, prefix: str, coords=("x", "y", "z")) -> Polynomial:
    """Dense polynomial of the given total degree with fresh formal parameters.

    The parameters of every generic polynomial used together must be built
    over the same coordinate tuple; contexts are merged by the caller via
    :func:`with_context`.
    """
    coords = tuple(coords)
    monos = [
        exp
        for exp in product(range(degree + 1), repeat=len(coords))
        if sum(exp) <= degree
    ]
    monos.sort()
    params = tuple(f"{prefix}{i}" for i in range(len(monos)))
    variables = coords + params
    out = Polynomial.zero(variables)
    for i, exp in enumerate(monos):
        full = tuple(exp) + tuple(1 if k == i else 0 for k in range(len(params)))
        out.terms[full] = Fraction(1)
    return out


def with_context(p: Polynomial, variables: tuple[str, ...]) -> Polynomial:
    """Re-embed ``p`` into a larger variable tuple (names must be a superset)."""
    variables = tuple(variables)
    idx = [variables.index(v) for v in p.vars]
    out = Polynomial.zero(variables)
    for exp, c in p.terms.items():
        new = [0] * len(variables)
        for pos, e in zip(idx, exp):
            new[pos] = e
        out.terms[tuple(new)] = c
    return out


def merge_contexts(*polys: Polynomial, coords: tuple[str, ...]) -> list[Polynomial]:
    """Put polynomials over one shared variable tuple: coords first, parameters after."""
    params: list[str] = []
    for p in polys:
        for v in p.vars:
            if v not in coords and v not in params:
                params.append(v)
    ctx = tuple(coords) + tuple(params)
    return [with_context(p, ctx) for p in polys]


class JacobiatorTensor:
    """Totally antisymmetric rank-3 tensor of polynomials, stored for i < j < k."""

    def __init__(self, dim: int, variables, slots: dict):
        self.dim = dim
        self.vars = tuple(variables)
        self._slots = {ijk: p for ijk, p in slots.items() if not p.is_zero}

    def component(self, i: int, j: int, k: int) -> Polynomial:
        if len({i, j, k}) < 3:
            return Polynomial.zero(self.vars)
        order = tuple(sorted((i, j, k)))
        base = self._slots.get(order, Polynomial.zero(self.vars))
        perm_sign = _perm_sign((i, j, k))
        return base if perm_sign == 1 else -base

    @property
    def is_zero(self) -> bool:
        return not self._slots


def _perm_sign(seq) -> int:
    ordering = sorted(range(len(seq)), key=lambda t: seq[t])
    sign = 1
    seen = [False] * len(seq)
    for s in range(len(seq)):
        if seen[s]:
            continue
        length = 0
        t = s
        while not seen[t]:
            seen[t] = True
            t = ordering[t]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def jacobiator(P: PoissonStructure) -> JacobiatorTensor:
    """Jac^{ijk} = sum over cyclic (i,j,k) of sum_l P^{il} d_l P^{jk}."""
    slots = {}
    for i, j, k in combinations(range(1, P.dim + 1), 3):
        total = Polynomial.zero(P.vars)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for ell in range(1, P.dim + 1):
                pa = P.component(a, ell)
                if pa.is_zero:
                    continue
                total = total + pa * P.component(b, c).diff(P.coords[ell - 1])
        slots[(i, j, k)] = total
    return JacobiatorTensor(P.dim, P.vars, slots)


def is_poisson(P: PoissonStructure) -> bool:
    return jacobiator(P).is_zero
