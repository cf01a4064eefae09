"""Small exact-arithmetic helpers (Fraction vectors, sympy bridges)."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp

RatVec = tuple  # tuple[Fraction, ...]


def ratvec(values: Iterable) -> RatVec:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: RatVec, b: RatVec) -> RatVec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: RatVec, b: RatVec) -> RatVec:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: RatVec) -> RatVec:
    c = Fraction(c)
    return tuple(c * x for x in a)


def neg(a: RatVec) -> RatVec:
    return tuple(-x for x in a)


def is_zero(a: RatVec) -> bool:
    return all(x == 0 for x in a)


def fmt(q) -> str:
    """Rational as a ``"p/q"`` string (denominator always written)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_vec(a: Sequence) -> list[str]:
    return [fmt(x) for x in a]


def parse(s: str) -> Fraction:
    return Fraction(s)


def to_sympy(rows) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else sp.Rational(x)
                       for x in row] for row in rows])


def from_sympy(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def inverse(rows) -> list[list[Fraction]]:
    """Exact inverse of a square rational matrix given as nested sequences."""
    m = to_sympy(rows)
    if m.det() == 0:
        raise ZeroDivisionError("singular matrix")
    inv = m.inv()
    return [[from_sympy(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def matvec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> RatVec:
    return tuple(dot(row, v) for row in m)
