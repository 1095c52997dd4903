"""Operators on Hilbert polynomials: the truncated algebra Q[D]/D^{n+1} and
general matrices, with the Euler-form adjoints.

Series are kept as coefficient vectors in powers of D; anything that is not
(known to be) a polynomial in D is an ``OperatorMatrix`` in an explicit basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

from . import linalg
from .errors import DimensionMismatch, NotNilpotent, NotUnipotent
from .lattice import BasisTag, K0Class, Scalar, make_context
from .linalg import QMatrix, Vector


def odd_rank(n: int) -> int:
    """Number of odd powers of D below D^{n+1}, i.e. floor((n+1)/2)."""
    return (n + 1) // 2


@dataclass(frozen=True)
class OperatorSeries:
    """sum_m c[m] D^m with D^{n+1} = 0."""

    n: int
    c: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", linalg.vector(self.c))
        if len(self.c) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coefficients, got {len(self.c)}")

    def _check(self, other: "OperatorSeries") -> None:
        if self.n != other.n:
            raise DimensionMismatch(self.n, other.n)

    def __add__(self, other: "OperatorSeries") -> "OperatorSeries":
        self._check(other)
        return OperatorSeries(self.n, tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "OperatorSeries") -> "OperatorSeries":
        return self + (-other)

    def __neg__(self) -> "OperatorSeries":
        return OperatorSeries(self.n, tuple(-a for a in self.c))

    def __mul__(self, other: Union["OperatorSeries", Scalar]) -> "OperatorSeries":
        if isinstance(other, (int, Fraction)):
            return OperatorSeries(self.n, tuple(other * a for a in self.c))
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        self._check(other)
        return OperatorSeries(self.n, linalg.truncated_product(self.c, other.c))

    def __rmul__(self, other: Scalar) -> "OperatorSeries":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int) -> "OperatorSeries":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = identity(self.n)
        for _ in range(k):
            result = result * self
        return result

    @property
    def constant(self) -> Fraction:
        return self.c[0]

    def is_odd(self) -> bool:
        return all(v == 0 for v in self.c[0::2])

    def odd_coeffs(self) -> Vector:
        """(c_1, c_3, ..., c_{2k-1})."""
        return self.c[1::2]

    def matrix(self, basis: BasisTag = BasisTag.STRUCTURE_SHEAF) -> "OperatorMatrix":
        return OperatorMatrix(self.n, BasisTag(basis), _series_matrix(self, BasisTag(basis)))


def identity(n: int) -> OperatorSeries:
    return OperatorSeries(n, (Fraction(1),) + (Fraction(0),) * n)


def zero(n: int) -> OperatorSeries:
    return OperatorSeries(n, (Fraction(0),) * (n + 1))


def d_operator(n: int) -> OperatorSeries:
    """The differentiation operator D = d/dt."""
    c = [Fraction(0)] * (n + 1)
    if n >= 1:
        c[1] = Fraction(1)
    return OperatorSeries(n, tuple(c))


def monomial(n: int, power: int, coeff: Scalar = 1) -> OperatorSeries:
    c = [Fraction(0)] * (n + 1)
    if power <= n:
        c[power] = Fraction(coeff)
    return OperatorSeries(n, tuple(c))


@lru_cache(maxsize=None)
def d_matrix(n: int) -> QMatrix:
    """D in the structure sheaf basis: D gamma_k = sum_{l=1..k} gamma_{k-l} / l."""
    rows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        for l in range(1, k + 1):
            rows[k - l][k] = Fraction(1, l)
    return linalg.matrix(rows)


@lru_cache(maxsize=None)
def d_power_matrix(n: int, m: int) -> QMatrix:
    return linalg.matpow(d_matrix(n), m)


@lru_cache(maxsize=4096)
def _series_matrix(s: OperatorSeries, basis: BasisTag) -> QMatrix:
    size = s.n + 1
    acc = linalg.zeros(size)
    for m, cm in enumerate(s.c):
        if cm:
            acc = linalg.add(acc, linalg.scale(cm, d_power_matrix(s.n, m)))
    if basis is BasisTag.STRUCTURE_SHEAF:
        return acc
    ctx = make_context(s.n)
    return linalg.matmul(linalg.matmul(ctx.from_ss[basis], acc), ctx.to_ss[basis])


@dataclass(frozen=True)
class OperatorMatrix:
    n: int
    basis: BasisTag
    entries: QMatrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", linalg.matrix(self.entries))
        object.__setattr__(self, "basis", BasisTag(self.basis))
        size = self.n + 1
        if len(self.entries) != size or any(len(r) != size for r in self.entries):
            raise ValueError(f"operator matrix must be {size}x{size}")

    def in_basis(self, basis: BasisTag) -> "OperatorMatrix":
        basis = BasisTag(basis)
        if basis is self.basis:
            return self
        ctx = make_context(self.n)
        to_b = ctx.conversion(self.basis, basis)
        from_b = ctx.conversion(basis, self.basis)
        return OperatorMatrix(self.n, basis, linalg.matmul(linalg.matmul(to_b, self.entries), from_b))

    def _aligned(self, other: "OperatorMatrix") -> QMatrix:
        if self.n != other.n:
            raise DimensionMismatch(self.n, other.n)
        return other.in_basis(self.basis).entries

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.basis, linalg.matmul(self.entries, self._aligned(other)))

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.basis, linalg.add(self.entries, self._aligned(other)))

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.basis, linalg.sub(self.entries, self._aligned(other)))

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.basis, linalg.scale(-1, self.entries))

    def same_as(self, other: "OperatorMatrix") -> bool:
        return self.n == other.n and self.entries == self._aligned(other)

    def power(self, k: int) -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.basis, linalg.matpow(self.entries, k))

    def is_zero(self) -> bool:
        return linalg.is_zero(self.entries)

    def is_integral(self) -> bool:
        return linalg.is_integral_matrix(self.entries)


OperatorLike = Union[OperatorSeries, OperatorMatrix]


def as_matrix(op: OperatorLike, basis: Optional[BasisTag] = None) -> OperatorMatrix:
    if isinstance(op, OperatorSeries):
        return op.matrix(basis or BasisTag.STRUCTURE_SHEAF)
    return op if basis is None else op.in_basis(basis)


def identity_matrix(n: int, basis: BasisTag = BasisTag.STRUCTURE_SHEAF) -> OperatorMatrix:
    return OperatorMatrix(n, basis, linalg.identity(n + 1))


def apply(op: OperatorLike, e: K0Class) -> K0Class:
    if op.n != e.n:
        raise DimensionMismatch(op.n, e.n)
    m = as_matrix(op, e.basis)
    return K0Class(e.n, e.basis, linalg.matvec(m.entries, e.coeffs))


def nabla(n: int) -> OperatorSeries:
    """1 - exp(-D): gamma_m -> gamma_{m-1}, gamma_0 -> 0."""
    return identity(n) - series_exp(-d_operator(n))


def series_exp(s: OperatorSeries) -> OperatorSeries:
    if s.constant != 0:
        raise NotNilpotent(f"exp needs a nilpotent series, constant term is {s.constant}")
    result = identity(s.n)
    term = identity(s.n)
    for k in range(1, s.n + 1):
        term = term * s * Fraction(1, k)
        result = result + term
    return result


def series_log(s: OperatorSeries) -> OperatorSeries:
    """ln(1 + N) = sum_{m=1..n} (-1)^{m+1} N^m / m, exact by nilpotency."""
    if s.constant != 1:
        raise NotUnipotent(f"log needs a unipotent series, constant term is {s.constant}")
    nil = s - identity(s.n)
    result = zero(s.n)
    power = identity(s.n)
    for m in range(1, s.n + 1):
        power = power * nil
        result = result + power * Fraction((-1) ** (m + 1), m)
    return result


def kappa(n: int) -> OperatorSeries:
    """Canonical operator of the Euler form: (-1)^n exp(-(n+1) D)."""
    return series_exp(d_operator(n) * (-(n + 1))) * ((-1) ** n)


def kappa_from_gram(n: int, basis: BasisTag = BasisTag.LINE_BUNDLE) -> OperatorMatrix:
    """G^{-1} G^T, the unique operator with chi(u, v) = chi(v, kappa u)."""
    ctx = make_context(n)
    g = ctx.gram(basis)
    return OperatorMatrix(n, basis, linalg.matmul(ctx.gram_inverse(basis), linalg.transpose(g)))


def right_adjoint(op: OperatorLike) -> OperatorMatrix:
    """G^{-1} M^T G: chi(u, M^v v) = chi(M u, v)."""
    m = as_matrix(op)
    ctx = make_context(m.n)
    g = ctx.gram(m.basis)
    entries = linalg.matmul(linalg.matmul(ctx.gram_inverse(m.basis), linalg.transpose(m.entries)), g)
    return OperatorMatrix(m.n, m.basis, entries)


def left_adjoint(op: OperatorLike) -> OperatorMatrix:
    """(G M G^{-1})^T: chi(N u, v) = chi(u, M v)."""
    m = as_matrix(op)
    ctx = make_context(m.n)
    g = ctx.gram(m.basis)
    inner = linalg.matmul(linalg.matmul(g, m.entries), ctx.gram_inverse(m.basis))
    return OperatorMatrix(m.n, m.basis, linalg.transpose(inner))


def is_reflexive(op: OperatorLike) -> bool:
    m = as_matrix(op)
    k = kappa(m.n).matrix(m.basis)
    return (m @ k).same_as(k @ m)


def reflexivity_conditions(op: OperatorLike) -> tuple[bool, bool, bool, bool]:
    """(left = right adjoint, double left = id, double right = id, commutes with kappa)."""
    m = as_matrix(op)
    return (
        left_adjoint(m).same_as(right_adjoint(m)),
        left_adjoint(left_adjoint(m)).same_as(m),
        right_adjoint(right_adjoint(m)).same_as(m),
        is_reflexive(m),
    )


def is_antiselfadjoint(op: OperatorLike) -> bool:
    m = as_matrix(op)
    neg = -m
    return left_adjoint(m).same_as(neg) and right_adjoint(m).same_as(neg)


def antiselfadjoint_basis(n: int) -> list[OperatorSeries]:
    """D, D^3, ..., D^{2 floor((n+1)/2) - 1}."""
    return [monomial(n, 2 * i - 1) for i in range(1, odd_rank(n) + 1)]


def antiselfadjoint_space(n: int, basis: BasisTag = BasisTag.STRUCTURE_SHEAF) -> list[OperatorMatrix]:
    """Solve M^T G + G M = 0 and M^T G^T + G^T M = 0 over all (n+1)^2 unknowns.

    The first system is M^v = -M, the second ^vM = -M.
    """
    size = n + 1
    g = make_context(n).gram(basis)
    gt = linalg.transpose(g)
    columns = []
    for a in range(size):
        for b in range(size):
            unit = [[Fraction(0)] * size for _ in range(size)]
            unit[a][b] = Fraction(1)
            e = linalg.matrix(unit)
            et = linalg.transpose(e)
            right = linalg.add(linalg.matmul(et, g), linalg.matmul(g, e))
            left = linalg.add(linalg.matmul(et, gt), linalg.matmul(gt, e))
            columns.append([v for row in right for v in row] + [v for row in left for v in row])
    system = linalg.transpose(linalg.matrix(columns))
    solutions = linalg.nullspace(system)
    return [
        OperatorMatrix(n, basis, tuple(tuple(sol[a * size:(a + 1) * size]) for a in range(size)))
        for sol in solutions
    ]


def series_image(s: OperatorSeries) -> Vector:
    """s(D) gamma_n in structure sheaf coordinates (column n of the matrix)."""
    out = [Fraction(0)] * (s.n + 1)
    for m, cm in enumerate(s.c):
        if cm:
            col = d_power_matrix(s.n, m)
            for j in range(s.n + 1):
                out[j] += cm * col[j][s.n]
    return tuple(out)


def series_from_image(n: int, image_ss: Iterable[Fraction]) -> OperatorSeries:
    """The unique s in Q[D] with s(D) gamma_n = image (structure sheaf coordinates).

    D^m gamma_n = gamma_{n-m} + lower terms, so the coefficients come out of a
    triangular solve starting at gamma_n.
    """
    image = linalg.vector(image_ss)
    c = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        row = n - m
        acc = image[row]
        for l in range(m):
            acc -= c[l] * d_power_matrix(n, l)[row][n]
        c[m] = acc
    return OperatorSeries(n, tuple(c))


def commutant_polynomial(op: OperatorLike) -> Optional[OperatorSeries]:
    """Return s with s(D) = M, or None when M is not a polynomial in D."""
    if isinstance(op, OperatorSeries):
        return op
    m = op.in_basis(BasisTag.STRUCTURE_SHEAF)
    column_n = tuple(row[m.n] for row in m.entries)
    candidate = series_from_image(m.n, column_n)
    if candidate.matrix(BasisTag.STRUCTURE_SHEAF).entries != m.entries:
        return None
    return candidate


def complete_even_from_odd(n: int, sign: int, odd: Iterable[Scalar]) -> OperatorSeries:
    """The unique f with f(-D) f(D) = 1, f(0) = sign and the given odd coefficients.

    Degree 2m of f(-D) f(D) gives 2 a_0 a_{2m} + sum_{0<i<2m} (-1)^i a_i a_{2m-i} = 0.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    odd = linalg.vector(odd)
    if len(odd) != odd_rank(n):
        raise ValueError(f"expected {odd_rank(n)} odd coefficients for n={n}, got {len(odd)}")
    a = [Fraction(0)] * (n + 1)
    a[0] = Fraction(sign)
    for idx, value in enumerate(odd):
        a[2 * idx + 1] = value
    for even in range(2, n + 1, 2):
        cross = sum(((-1) ** i * a[i] * a[even - i] for i in range(1, even)), Fraction(0))
        a[even] = -cross / (2 * a[0])
    return OperatorSeries(n, tuple(a))


def odd_part_log(f: OperatorSeries) -> tuple[int, Vector]:
    """Split f = sign * exp(g) and return (sign, odd coefficients of g)."""
    if f.constant not in (1, -1):
        raise NotUnipotent(f"constant term {f.constant} is not +-1")
    sign = int(f.constant)
    g = series_log(f * sign)
    return sign, g.odd_coeffs()
