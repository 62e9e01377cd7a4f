"""The coefficient ring Q[z] with one formal generator z = zeta(3)^2/pi^6.

Only Q-linear combinations of 1 and z ever occur; any product that would
need z^2 raises, which doubles as a consistency guard on the pipelines.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Coefficient", "ZetaDegreeError", "parse_coefficient", "ZETA_SYMBOL"]

ZETA_SYMBOL = "zeta(3)^2/pi^6"


class ZetaDegreeError(ArithmeticError):
    """A product left the degree <= 1 part of Q[zeta(3)^2/pi^6]."""


@dataclass(frozen=True)
class Coefficient:
    rational: Fraction = Fraction(0)
    zeta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "zeta", Fraction(self.zeta))

    @classmethod
    def of(cls, value) -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        return cls(Fraction(value))

    def __add__(self, other):
        other = Coefficient.of(other)
        return Coefficient(self.rational + other.rational, self.zeta + other.zeta)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.rational, -self.zeta)

    def __sub__(self, other):
        return self + (-Coefficient.of(other))

    def __mul__(self, other):
        other = Coefficient.of(other)
        if self.zeta and other.zeta:
            raise ZetaDegreeError(
                f"product of {self} and {other} needs the square of the generator"
            )
        return Coefficient(
            self.rational * other.rational,
            self.rational * other.zeta + self.zeta * other.rational,
        )

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.rational or self.zeta)

    @property
    def is_zero(self) -> bool:
        return not self

    def __str__(self):
        if not self.zeta:
            return str(self.rational)
        if self.zeta == 1:
            text = ZETA_SYMBOL
        elif self.zeta == -1:
            text = "-" + ZETA_SYMBOL
        else:
            text = f"{self.zeta}*{ZETA_SYMBOL}"
        if self.rational > 0:
            text += f"+{self.rational}"
        elif self.rational < 0:
            text += str(self.rational)
        return text

    __repr__ = __str__


_RAT = r"[+-]?\d+(?:/\d+)?"
_ZETA_TERM = re.compile(
    rf"({_RAT}\*|[+-])?zeta\(3\)\^2/pi\^6", flags=re.ASCII
)


def parse_coefficient(text: str) -> Coefficient:
    """Parse e.g. '-1/6', '15/4*zeta(3)^2/pi^6-19/3240', '13/2903040-1/256*zeta(3)^2/pi^6'.

    The zeta factor may appear with a bare sign ('-zeta(3)^2/pi^6+...') or
    with no prefix at all; the rational term may come first or last.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty coefficient")
    zeta = Fraction(0)
    matches = list(_ZETA_TERM.finditer(s))
    if len(matches) > 1:
        raise ValueError(f"more than one zeta term in {text!r}")
    if matches:
        m = matches[0]
        prefix = m.group(1)
        if prefix is None:
            zeta = Fraction(1)
        elif prefix in "+-":
            zeta = Fraction(prefix + "1")
        else:
            zeta = Fraction(prefix[:-1])
        s = s[: m.start()] + s[m.end():]
    rational = Fraction(0)
    if s and s not in "+-":
        if not re.fullmatch(_RAT, s, flags=re.ASCII):
            raise ValueError(f"malformed rational part {s!r} in {text!r}")
        rational = Fraction(s)
    elif s:
        raise ValueError(f"dangling sign in {text!r}")
    return Coefficient(rational, zeta)
