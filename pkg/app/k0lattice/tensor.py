"""Ring structure of K0 through Z[[nabla]]/nabla^{n+1}.

A class E corresponds to psi(nabla) with E = psi(nabla) gamma_n; the
coefficient of nabla^j is the coefficient of gamma_{n-j}. Tensor product is
multiplication of these truncated power series.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from . import linalg
from .errors import DimensionMismatch, NotInCommutant
from .lattice import BasisTag, K0Class, line_bundle
from .linalg import Vector
from .operators import (
    OperatorLike,
    OperatorSeries,
    apply,
    commutant_polynomial,
    d_operator,
    is_reflexive,
    nabla,
    series_exp,
    series_image,
)


def nabla_coords(e: K0Class) -> Vector:
    return tuple(reversed(e.ss))


def from_nabla_coords(n: int, coords: Iterable) -> K0Class:
    v = linalg.vector(coords)
    if len(v) != n + 1:
        raise ValueError(f"expected {n + 1} nabla coordinates, got {len(v)}")
    return K0Class(n, BasisTag.STRUCTURE_SHEAF, tuple(reversed(v)))


def tensor(e: K0Class, f: K0Class) -> K0Class:
    if e.n != f.n:
        raise DimensionMismatch(e.n, f.n)
    out = linalg.truncated_product(nabla_coords(e), nabla_coords(f))
    return from_nabla_coords(e.n, out).to(e.basis)


def tensor_power(e: K0Class, m: int) -> K0Class:
    if m < 0:
        raise ValueError("tensor powers are taken for m >= 0 only")
    result = line_bundle(e.n, 0)
    for _ in range(m):
        result = tensor(result, e)
    return result.to(e.basis)


def shift_series(n: int, m: int) -> OperatorSeries:
    """exp(mD): h(t) -> h(t + m)."""
    return series_exp(d_operator(n) * m)


def twist(e: K0Class, m: int) -> K0Class:
    return apply(shift_series(e.n, m), e)


def canonical_class(n: int) -> K0Class:
    """omega = O(-n-1)."""
    return line_bundle(n, -n - 1)


def restrict_hyperplane(e: K0Class) -> K0Class:
    return apply(nabla(e.n), e)


def twisted_subspace_class(n: int, k: int, m: int) -> K0Class:
    """O(k) (x) O_{P_m} = sum_{j=0..m} binom(k+j-1, j) O_{P_{m-j}}."""
    if not 0 <= m <= n:
        raise ValueError(f"subspace dimension {m} outside 0..{n}")
    coeffs = [Fraction(0)] * (n + 1)
    for j in range(m + 1):
        coeffs[m - j] = Fraction(linalg.binom(k + j - 1, j))
    return K0Class(n, BasisTag.STRUCTURE_SHEAF, tuple(coeffs))


def operator_class(op: OperatorLike) -> K0Class:
    """F with op(E) = E (x) F for every E; F = op(O)."""
    if not isinstance(op, OperatorSeries):
        if not is_reflexive(op):
            raise NotInCommutant("operator does not commute with the canonical operator")
        poly = commutant_polynomial(op)
        if poly is None:
            raise NotInCommutant("operator is not a polynomial in D")
        op = poly
    return K0Class(op.n, BasisTag.STRUCTURE_SHEAF, series_image(op))
