"""K0 of projective n-space as a lattice with the Euler form.

Three coordinate systems are supported (see ``BasisTag``). The structure
sheaf basis is the working basis: index ``j`` is the class of the linear
subspace of dimension ``j``, whose Hilbert polynomial is
``gamma_j(t) = binom(t + j, j)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from . import linalg
from .errors import DimensionMismatch, InconsistencyError, NotALatticeClass
from .linalg import QMatrix, Vector

log = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class BasisTag(str, Enum):
    LINE_BUNDLE = "line_bundle"
    STRUCTURE_SHEAF = "structure_sheaf"
    HILBERT = "hilbert"

    @property
    def is_lattice_basis(self) -> bool:
        return self is not BasisTag.HILBERT


def _gamma_monomials(j: int, n: int) -> Vector:
    """Monomial coefficients of (t+1)(t+2)...(t+j)/j!, padded to length n+1."""
    poly = [Fraction(1)]
    for m in range(1, j + 1):
        # multiply by (t + m)/m = 1 + t/m
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d] += c
            nxt[d + 1] += c / m
        poly = nxt
    return tuple(poly) + (Fraction(0),) * (n + 1 - len(poly))


def line_bundle_coords(n: int, k: int) -> Vector:
    """Structure-sheaf coordinates of O(k): gamma_n(t+k) = sum_l binom(k+l-1, l) gamma_{n-l}."""
    return tuple(Fraction(linalg.binom(k + (n - j) - 1, n - j)) for j in range(n + 1))


@dataclass(frozen=True, eq=False)
class ProjectiveContext:
    n: int
    to_ss: dict[BasisTag, QMatrix] = field(repr=False)
    from_ss: dict[BasisTag, QMatrix] = field(repr=False)
    grams: dict[BasisTag, QMatrix] = field(repr=False)

    @property
    def size(self) -> int:
        return self.n + 1

    def conversion(self, source: BasisTag, target: BasisTag) -> QMatrix:
        """Matrix taking coordinates in ``source`` to coordinates in ``target``."""
        if source is target:
            return linalg.identity(self.size)
        return _conversion(self.n, source, target)

    def gram(self, basis: BasisTag) -> QMatrix:
        return self.grams[basis]

    def gram_inverse(self, basis: BasisTag) -> QMatrix:
        return _gram_inverse(self.n, basis)


@lru_cache(maxsize=None)
def make_context(n: int) -> ProjectiveContext:
    if n < 0:
        raise ValueError(f"dimension must be non-negative, got {n}")
    log.debug("building projective context for n=%d", n)
    size = n + 1

    # columns: O(i) in gamma coordinates
    lb_to_ss = linalg.transpose(tuple(line_bundle_coords(n, i) for i in range(size)))
    # columns: gamma_j in monomial coordinates
    ss_to_hil = linalg.transpose(tuple(_gamma_monomials(j, n) for j in range(size)))

    ss_to_lb = linalg.inverse(lb_to_ss)
    hil_to_ss = linalg.inverse(ss_to_hil)

    for m in (lb_to_ss, ss_to_lb):
        if not linalg.is_integral_matrix(m) or abs(linalg.det(m)) != 1:
            raise InconsistencyError(f"line bundle / structure sheaf change of basis is not unimodular (n={n})")

    to_ss = {
        BasisTag.LINE_BUNDLE: lb_to_ss,
        BasisTag.STRUCTURE_SHEAF: linalg.identity(size),
        BasisTag.HILBERT: hil_to_ss,
    }
    from_ss = {
        BasisTag.LINE_BUNDLE: ss_to_lb,
        BasisTag.STRUCTURE_SHEAF: linalg.identity(size),
        BasisTag.HILBERT: ss_to_hil,
    }

    gram_lb = tuple(
        tuple(Fraction(linalg.binom(n + j - i, n)) for j in range(size)) for i in range(size)
    )
    if linalg.det(gram_lb) != 1:
        raise InconsistencyError(f"Euler form Gram matrix is not unimodular (n={n})")

    grams = {BasisTag.LINE_BUNDLE: gram_lb}
    for basis in (BasisTag.STRUCTURE_SHEAF, BasisTag.HILBERT):
        # coordinates in `basis` -> line bundle coordinates
        p = linalg.matmul(ss_to_lb, to_ss[basis])
        grams[basis] = linalg.matmul(linalg.matmul(linalg.transpose(p), gram_lb), p)
    if not linalg.is_integral_matrix(grams[BasisTag.STRUCTURE_SHEAF]):
        raise InconsistencyError(f"Gram matrix in structure sheaf basis is not integral (n={n})")

    return ProjectiveContext(n=n, to_ss=to_ss, from_ss=from_ss, grams=grams)


@lru_cache(maxsize=None)
def _conversion(n: int, source: BasisTag, target: BasisTag) -> QMatrix:
    ctx = make_context(n)
    return linalg.matmul(ctx.from_ss[target], ctx.to_ss[source])


@lru_cache(maxsize=None)
def _gram_inverse(n: int, basis: BasisTag) -> QMatrix:
    return linalg.inverse(make_context(n).gram(basis))


@dataclass(frozen=True)
class GramMatrix:
    n: int
    basis: BasisTag
    entries: QMatrix

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]


def gram_matrix(n: int, basis: BasisTag = BasisTag.LINE_BUNDLE) -> GramMatrix:
    return GramMatrix(n=n, basis=basis, entries=make_context(n).gram(basis))


@dataclass(frozen=True, eq=False)
class K0Class:
    """An element of K0 (x) Q, stored as exact coordinates in ``basis``.

    Equality and hashing are basis independent.
    """

    n: int
    basis: BasisTag
    coeffs: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", linalg.vector(self.coeffs))
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "basis", BasisTag(self.basis))

    def to(self, target: BasisTag) -> "K0Class":
        target = BasisTag(target)
        if target is self.basis:
            return self
        conv = make_context(self.n).conversion(self.basis, target)
        return K0Class(self.n, target, linalg.matvec(conv, self.coeffs))

    @property
    def ss(self) -> Vector:
        return self.to(BasisTag.STRUCTURE_SHEAF).coeffs

    def _check(self, other: "K0Class") -> None:
        if self.n != other.n:
            raise DimensionMismatch(self.n, other.n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, K0Class):
            return NotImplemented
        return self.n == other.n and self.ss == other.ss

    def __hash__(self) -> int:
        return hash((self.n, self.ss))

    def __add__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        o = other.to(self.basis).coeffs
        return K0Class(self.n, self.basis, tuple(a + b for a, b in zip(self.coeffs, o)))

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def __neg__(self) -> "K0Class":
        return K0Class(self.n, self.basis, tuple(-a for a in self.coeffs))

    def __mul__(self, c: Scalar) -> "K0Class":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return K0Class(self.n, self.basis, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs)
        return f"K0Class(n={self.n}, {self.basis.value}, [{body}])"


def line_bundle(n: int, k: int = 0) -> K0Class:
    """O(k) for any integer k."""
    return K0Class(n, BasisTag.STRUCTURE_SHEAF, line_bundle_coords(n, k))


def structure_sheaf(n: int, j: int) -> K0Class:
    """O restricted to a linear subspace of dimension j."""
    if not 0 <= j <= n:
        raise ValueError(f"subspace dimension {j} outside 0..{n}")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[j] = Fraction(1)
    return K0Class(n, BasisTag.STRUCTURE_SHEAF, tuple(coeffs))


def point_class(n: int) -> K0Class:
    return structure_sheaf(n, 0)


def zero_class(n: int) -> K0Class:
    return K0Class(n, BasisTag.STRUCTURE_SHEAF, (Fraction(0),) * (n + 1))


def from_coeffs(n: int, basis: BasisTag, coeffs: Iterable) -> K0Class:
    return K0Class(n, BasisTag(basis), linalg.vector(coeffs))


def convert(e: K0Class, target: BasisTag) -> K0Class:
    return e.to(target)


def chi(e: K0Class, f: K0Class) -> Fraction:
    """Euler pairing chi(E, F) = x^T G y in line bundle coordinates."""
    if e.n != f.n:
        raise DimensionMismatch(e.n, f.n)
    g = make_context(e.n).gram(BasisTag.LINE_BUNDLE)
    x = e.to(BasisTag.LINE_BUNDLE).coeffs
    y = f.to(BasisTag.LINE_BUNDLE).coeffs
    return sum((xi * v for xi, v in zip(x, linalg.matvec(g, y))), Fraction(0))


def is_lattice(e: K0Class) -> bool:
    return linalg.is_integral(e.to(BasisTag.LINE_BUNDLE).coeffs)


def rank_c1(e: K0Class) -> tuple[int, int]:
    """Rank and first Chern class, extended linearly from rank(O(m)) = 1, c1(O(m)) = m.

    In structure-sheaf coordinates these are the coefficients of gamma_n and
    gamma_{n-1}, since O(m) = gamma_n + m gamma_{n-1} + ...
    """
    if not is_lattice(e):
        raise NotALatticeClass(f"rank/c1 need a lattice class, got {e!r}")
    ss = e.ss
    rank = int(ss[e.n])
    c1 = int(ss[e.n - 1]) if e.n >= 1 else 0
    return rank, c1


def hilbert_polynomial(e: K0Class) -> Vector:
    return e.to(BasisTag.HILBERT).coeffs


def euler_characteristic(e: K0Class) -> Fraction:
    """chi(O, E), the Hilbert polynomial at t = 0."""
    return hilbert_polynomial(e)[0]
