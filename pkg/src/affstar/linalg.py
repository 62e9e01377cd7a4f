"""Incremental exact linear algebra over Q on sparse columns.

Columns are sparse mappings from hashable row keys to Fractions.  The
echelon structure keeps Gauss-reduced pivot columns together with the
combination of original columns that produced them, so solving against a new
right-hand side is a read-only reduction and columns can keep arriving (the
layered factorization adds them between solve attempts).  Row order is the
natural order of the row keys, making every reduction deterministic.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = ["ColumnEchelon"]


class ColumnEchelon:
    """Gauss-reduced column space with combination tracking."""

    def __init__(self):
        # pivot row key -> (column vector, combination of original labels)
        self.pivots: dict = {}
        self.n_columns = 0

    def _reduce(self, vec: dict, combo: dict) -> tuple[dict, dict]:
        while vec:
            row = min(vec)
            hit = self.pivots.get(row)
            if hit is None:
                return vec, combo
            pcol, pcombo = hit
            factor = vec[row]  # pivot entry is normalized to 1
            for r, c in pcol.items():
                s = vec.get(r, 0) - factor * c
                if s:
                    vec[r] = s
                else:
                    vec.pop(r, None)
            for label, c in pcombo.items():
                s = combo.get(label, 0) - factor * c
                if s:
                    combo[label] = s
                else:
                    combo.pop(label, None)
        return vec, combo

    def add_column(self, vec: dict, label) -> bool:
        """Insert a column; returns False when it was already in the span."""
        vec = {r: Fraction(c) for r, c in vec.items() if c}
        combo = {label: Fraction(1)}
        vec, combo = self._reduce(vec, combo)
        self.n_columns += 1
        if not vec:
            return False
        row = min(vec)
        inv = 1 / vec[row]
        vec = {r: c * inv for r, c in vec.items()}
        combo = {l: c * inv for l, c in combo.items()}
        self.pivots[row] = (vec, combo)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, rhs: dict) -> dict | None:
        """Coefficients x with sum x_label * column_label = rhs, or None."""
        residue, combo = self.residue(rhs)
        if residue:
            return None
        return {label: -c for label, c in combo.items()}

    def residue(self, rhs: dict) -> tuple[dict, dict]:
        """(canonical residue of rhs modulo the span, reduction combination).

        rhs + sum combo_label * column_label = residue holds exactly.
        """
        vec = {r: Fraction(c) for r, c in rhs.items() if c}
        return self._reduce(vec, {})
