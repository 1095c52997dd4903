"""Exact rational matrix helpers.

Matrices are immutable tuples of rows of ``Fraction``. Anything beyond
elementwise arithmetic (products, inverses, determinants, nullspaces) is
delegated to sympy's ``DomainMatrix`` over ``QQ``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import QQ, binomial
from sympy.polys.matrices import DomainMatrix

Vector = tuple[Fraction, ...]
QMatrix = tuple[Vector, ...]


def frac(x) -> Fraction:
    """Coerce an int, Fraction, sympy Rational or QQ element to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    return Fraction(int(x.numerator), int(x.denominator))


def vector(values: Iterable) -> Vector:
    return tuple(frac(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> QMatrix:
    return tuple(vector(r) for r in rows)


def to_domain(m: QMatrix) -> DomainMatrix:
    rows = [[QQ(v.numerator, v.denominator) for v in r] for r in m]
    ncols = len(m[0]) if m else 0
    return DomainMatrix(rows, (len(m), ncols), QQ)


def from_domain(dm: DomainMatrix) -> QMatrix:
    return tuple(tuple(frac(v) for v in row) for row in dm.to_list())


def identity(size: int) -> QMatrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(size))
        for i in range(size)
    )


def zeros(rows: int, cols: int | None = None) -> QMatrix:
    cols = rows if cols is None else cols
    return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))


def transpose(m: QMatrix) -> QMatrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    return from_domain(to_domain(a).matmul(to_domain(b)))


def matvec(m: QMatrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m)


def add(a: QMatrix, b: QMatrix) -> QMatrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: QMatrix, b: QMatrix) -> QMatrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c, m: QMatrix) -> QMatrix:
    c = frac(c)
    return tuple(tuple(c * x for x in row) for row in m)


def inverse(m: QMatrix) -> QMatrix:
    return from_domain(to_domain(m).inv())


def det(m: QMatrix) -> Fraction:
    return frac(to_domain(m).det())


def rank(m: QMatrix) -> int:
    if not m:
        return 0
    return to_domain(m).rank()


def matpow(m: QMatrix, k: int) -> QMatrix:
    if k == 0:
        return identity(len(m))
    return from_domain(to_domain(m) ** k)


def truncated_product(x: Sequence, y: Sequence, zero=Fraction(0)) -> list:
    """Coefficients of x(t) y(t) mod t^len(x); ``zero`` fixes the coefficient ring."""
    size = len(x)
    out = [zero] * size
    for i, a in enumerate(x):
        if a:
            for j in range(size - i):
                if y[j]:
                    out[i + j] += a * y[j]
    return out


def nullspace(m: QMatrix) -> list[Vector]:
    """Basis (as row vectors) of {x : m x = 0}."""
    return [tuple(frac(v) for v in row) for row in to_domain(m).nullspace().to_list()]


def is_zero(m: QMatrix) -> bool:
    return all(v == 0 for row in m for v in row)


def is_integral(values: Iterable[Fraction]) -> bool:
    return all(frac(v).denominator == 1 for v in values)


def is_integral_matrix(m: QMatrix) -> bool:
    return all(is_integral(row) for row in m)


@lru_cache(maxsize=None)
def binom(a: int, b: int) -> int:
    """binom(a, b) as the polynomial a(a-1)...(a-b+1)/b!; valid for negative a."""
    if b < 0:
        return 0
    return int(binomial(a, b))
