"""Lattice isometries of K0 in the identity component.

Every real isometry is sign * exp(a1 D + a3 D^3 + ...). It preserves the
lattice iff it sends O to a lattice class, because it acts as tensoring by
that class. ``compute_generators`` finds a basis of the group of such
exponent vectors, which is a lattice of rank floor((n+1)/2).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, floor, lcm
from typing import Iterable, Optional, Sequence

from sympy import QQ, Matrix, divisors, primerange
from sympy.matrices.normalforms import hermite_normal_form
from sympy.polys.rings import xring

from . import linalg
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InconsistencyError,
    NotALatticeIsometry,
    NotAnIsometry,
    NotUnipotent,
    VerificationError,
)
from .lattice import BasisTag, K0Class, is_lattice, make_context, point_class, rank_c1, structure_sheaf
from .linalg import Vector
from .operators import (
    OperatorLike,
    OperatorMatrix,
    OperatorSeries,
    as_matrix,
    commutant_polynomial,
    d_power_matrix,
    monomial,
    odd_rank,
    series_exp,
    series_log,
    zero,
)
from .tensor import operator_class

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000

# (monomial exponents, coefficient) pairs of a polynomial in a3, a5, ...
Terms = tuple[tuple[tuple[int, ...], Fraction], ...]


@dataclass(frozen=True)
class IsometryDescriptor:
    """sign * exp(a1 D + a3 D^3 + ... + a_{2k-1} D^{2k-1}), k = floor((n+1)/2)."""

    n: int
    sign: int
    odd: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "odd", linalg.vector(self.odd))
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if len(self.odd) != odd_rank(self.n):
            raise ValueError(f"expected {odd_rank(self.n)} odd coefficients for n={self.n}, got {len(self.odd)}")

    def generator(self) -> OperatorSeries:
        g = zero(self.n)
        for idx, a in enumerate(self.odd):
            if a:
                g = g + monomial(self.n, 2 * idx + 1, a)
        return g

    def series(self) -> OperatorSeries:
        return series_exp(self.generator()) * self.sign

    def matrix(self, basis: BasisTag = BasisTag.STRUCTURE_SHEAF) -> OperatorMatrix:
        return self.series().matrix(basis)

    def compose(self, other: "IsometryDescriptor") -> "IsometryDescriptor":
        if self.n != other.n:
            raise DimensionMismatch(self.n, other.n)
        return IsometryDescriptor(
            self.n, self.sign * other.sign, tuple(a + b for a, b in zip(self.odd, other.odd))
        )

    __mul__ = compose

    def inverse(self) -> "IsometryDescriptor":
        return IsometryDescriptor(self.n, self.sign, tuple(-a for a in self.odd))

    def scaled(self, c) -> "IsometryDescriptor":
        """Same sign, exponent multiplied by c."""
        c = linalg.frac(c)
        return IsometryDescriptor(self.n, self.sign, tuple(c * a for a in self.odd))


def descriptor_matrix(d: IsometryDescriptor, basis: BasisTag = BasisTag.STRUCTURE_SHEAF) -> OperatorMatrix:
    return d.matrix(basis)


def identity_descriptor(n: int) -> IsometryDescriptor:
    return IsometryDescriptor(n, 1, (0,) * odd_rank(n))


def negation(n: int) -> IsometryDescriptor:
    """E -> -E."""
    return IsometryDescriptor(n, -1, (0,) * odd_rank(n))


def twist_descriptor(n: int, m: int = 1) -> IsometryDescriptor:
    odd = [Fraction(0)] * odd_rank(n)
    if odd:
        odd[0] = Fraction(m)
    return IsometryDescriptor(n, 1, tuple(odd))


def with_a1(d: IsometryDescriptor, b) -> IsometryDescriptor:
    return IsometryDescriptor(d.n, d.sign, (linalg.frac(b),) + d.odd[1:])


def is_lattice_isometry(d: IsometryDescriptor) -> bool:
    return is_lattice(operator_class(d.series()))


def matrix_is_integral(d: IsometryDescriptor) -> bool:
    """Integrality of the full matrix in both lattice bases."""
    return all(d.matrix(b).is_integral() for b in (BasisTag.LINE_BUNDLE, BasisTag.STRUCTURE_SHEAF))


def isometry_obstruction(d: IsometryDescriptor) -> Optional[str]:
    """None for a lattice isometry, otherwise why O is not sent into the lattice."""
    image = operator_class(d.series()).ss
    bad = [j for j in range(d.n, -1, -1) if image[j].denominator != 1]
    if not bad:
        return None
    if d.odd and d.odd[0].denominator != 1:
        return "a1 must be an integer"
    if len(d.odd) >= 2 and not any(d.odd[:-1]):
        top = d.odd[-1]
        if top.denominator != 1:
            return "top coefficient must be an integer"
        if d.n % 2 == 0 and top.numerator % 2:
            return "top coefficient must be even"
    j = bad[0]
    return f"image of O has non-integral coefficient {image[j]} at O_P{j}"


def normalize_a1(d: IsometryDescriptor) -> tuple[IsometryDescriptor, int]:
    """Split off the twist: d = d0 o exp(m D) with a1(d0) = 0."""
    a1 = d.odd[0] if d.odd else Fraction(0)
    if a1.denominator != 1:
        raise InconsistencyError(
            f"a1 = {a1} is not an integer, so O_P1 is sent to 1 + (1 + a1) t outside the lattice"
        )
    if not is_lattice_isometry(d):
        raise NotALatticeIsometry(isometry_obstruction(d) or "not a lattice isometry")
    return with_a1(d, 0), int(a1)


def top_generator(n: int) -> IsometryDescriptor:
    """exp(a D^{2k-1}) with the smallest admissible a: 1 for odd n, 2 for even n."""
    if n < 3:
        raise ValueError(f"the top generator is defined for n >= 3, got n={n}")
    odd = [Fraction(0)] * odd_rank(n)
    odd[-1] = Fraction(1 if n % 2 else 2)
    return IsometryDescriptor(n, 1, tuple(odd))


def top_generator_action(e: K0Class) -> K0Class:
    """Closed form of the top generator through rank and c1."""
    n = e.n
    if n < 3:
        raise ValueError(f"the top generator is defined for n >= 3, got n={n}")
    rk, c1 = rank_c1(e)
    if n % 2:
        return e + rk * point_class(n)
    return e + (2 * rk) * structure_sheaf(n, 1) + (2 * c1 + (n - 1) * rk) * point_class(n)


def axis_period(n: int, index: int) -> int:
    """Smallest b > 0 with exp(b D^{2 index - 1}) a lattice isometry; it divides n!."""
    k = odd_rank(n)
    if not 1 <= index <= k:
        raise ValueError(f"odd index {index} outside 1..{k}")
    for b in divisors(factorial(n)):
        odd = [Fraction(0)] * k
        odd[index - 1] = Fraction(int(b))
        if is_lattice_isometry(IsometryDescriptor(n, 1, tuple(odd))):
            return int(b)
    raise InconsistencyError(f"exp(n! D^{2 * index - 1}) is not integral for n={n}")


def canonical_basis(vectors: Iterable[Sequence], dim: int) -> tuple[Vector, ...]:
    """Echelon basis of the Z-span of rational vectors, from the HNF of the scaled lattice.

    Rows are ordered by pivot (lowest nonzero index), pivots are positive and
    entries above a pivot are reduced modulo it, so equal lattices give equal
    output.
    """
    vecs = [linalg.vector(v) for v in vectors]
    vecs = [v for v in vecs if any(v)]
    if not vecs or dim == 0:
        return ()
    if linalg.rank(tuple(vecs)) < dim:
        raise ValueError(f"vectors span a sublattice of rank < {dim}")
    delta = lcm(*(x.denominator for v in vecs for x in v))
    # columns are generators, rows are coordinates in reverse order
    rows = [[int(v[dim - 1 - r] * delta) for v in vecs] for r in range(dim)]
    w = hermite_normal_form(Matrix(rows))
    basis = []
    for j in reversed(range(w.cols)):
        col = [Fraction(int(w[r, j]), delta) for r in range(dim)]
        basis.append(tuple(reversed(col)))
    return tuple(basis)


def _pivot(row: Vector) -> int:
    return next(i for i, v in enumerate(row) if v)


def _span_contains(basis: Sequence[Vector], v: Sequence[Fraction]) -> bool:
    rest = list(linalg.vector(v))
    for row in basis:
        p = _pivot(row)
        coef = rest[p] / row[p]
        if coef.denominator != 1:
            return False
        rest = [a - coef * b for a, b in zip(rest, row)]
    return not any(rest)


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    generators: tuple[IsometryDescriptor, ...]
    hnf_denominator: int
    hnf: tuple[tuple[int, ...], ...]

    @classmethod
    def from_descriptors(cls, n: int, descriptors: Iterable[IsometryDescriptor]) -> "GeneratorSet":
        gens = tuple(descriptors)
        if any(g.sign != 1 or g.n != n for g in gens):
            raise ValueError("generators must be identity-component descriptors of the same n")
        basis = canonical_basis((g.odd for g in gens), odd_rank(n))
        delta = lcm(1, *(x.denominator for row in basis for x in row))
        hnf = tuple(tuple(int(x * delta) for x in row) for row in basis)
        return cls(n=n, generators=gens, hnf_denominator=delta, hnf=hnf)

    @property
    def basis(self) -> tuple[Vector, ...]:
        return tuple(tuple(Fraction(x, self.hnf_denominator) for x in row) for row in self.hnf)

    def contains(self, d: IsometryDescriptor) -> bool:
        return d.n == self.n and d.sign == 1 and _span_contains(self.basis, d.odd)

    def tensor_classes(self) -> list[K0Class]:
        return [operator_class(g.series()) for g in self.generators]


def lattice_equal(a: GeneratorSet, b: GeneratorSet) -> bool:
    return a.n == b.n and a.basis == b.basis


def image_polynomials(n: int) -> list[Terms]:
    """Coefficients of exp(a3 D^3 + a5 D^5 + ...) gamma_n on gamma_0..gamma_n.

    Entry j is a polynomial in (a3, a5, ..., a_{2k-1}) given as its terms.
    """
    k = odd_rank(n)
    names = [f"a{2 * i - 1}" for i in range(2, k + 1)]
    ring, gens = xring(names, QQ)
    g = [ring.zero] * (n + 1)
    for i, gen in zip(range(2, k + 1), gens):
        g[2 * i - 1] = gen
    f = [ring.zero] * (n + 1)
    f[0] = ring.one
    term = list(f)
    for p in range(1, n + 1):
        term = [t * QQ(1, p) for t in linalg.truncated_product(term, g, ring.zero)]
        f = [a + b for a, b in zip(f, term)]

    images = [ring.zero] * (n + 1)
    for m, fm in enumerate(f):
        if not fm:
            continue
        dm = d_power_matrix(n, m)
        for j in range(n + 1):
            c = dm[j][n]
            if c:
                images[j] += fm * QQ(c.numerator, c.denominator)
    return [tuple((tuple(mon), linalg.frac(c)) for mon, c in p.terms()) for p in images]


def _evaluate(terms: Terms, values: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for mon, c in terms:
        v = c
        for x, e in zip(values, mon):
            if e:
                v *= x ** e
        total += v
    return total


def _top_variable(terms: Terms) -> int:
    return max((i for mon, _ in terms for i, e in enumerate(mon) if e), default=-1)


def _residue_solutions(n: int, periods: Sequence[int], budget: int) -> list[Vector]:
    """Exponent vectors (a3, ..., a_{2k-1}) in the period box that map O into the lattice.

    Variable v (odd power 2v+3) is first seen in the gamma_{n-2v-3}
    coefficient as v + q(earlier), which fixes it modulo 1; it then runs over
    that residue class inside [0, period).
    """
    nvars = len(periods)
    polys = image_polynomials(n)
    by_stage: list[list[Terms]] = [[] for _ in range(nvars)]
    for j, terms in enumerate(polys):
        top = _top_variable(terms)
        if top < 0:
            if _evaluate(terms, ()).denominator != 1:
                raise InconsistencyError(f"constant gamma_{j} coefficient is not integral")
        else:
            by_stage[top].append(terms)

    pins: list[Terms] = []
    for v in range(nvars):
        pin = polys[n - (2 * v + 3)]
        unit = tuple(1 if i == v else 0 for i in range(nvars))
        linear = [c for mon, c in pin if mon == unit]
        rest = tuple((mon, c) for mon, c in pin if mon != unit)
        if linear != [1] or _top_variable(rest) >= v:
            raise InconsistencyError(f"a{2 * v + 3} does not enter gamma_{n - 2 * v - 3} with coefficient 1")
        pins.append(rest)

    spent = 0
    prefixes: list[Vector] = [()]
    for v in range(nvars):
        survivors: list[Vector] = []
        for prefix in prefixes:
            shift = -_evaluate(pins[v], prefix + (Fraction(0),) * (nvars - v))
            residue = shift - floor(shift)
            for t in range(periods[v]):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(
                        f"search budget {budget} exhausted at a{2 * v + 3} (n={n})",
                        partial={
                            "n": n,
                            "stage": f"a{2 * v + 3}",
                            "periods": list(periods),
                            "evaluated": spent - 1,
                            "budget": budget,
                            "residues": [[str(x) for x in p] for p in prefixes],
                            "found": [[str(x) for x in p] for p in survivors],
                        },
                    )
                cand = prefix + (residue + t,)
                padded = cand + (Fraction(0),) * (nvars - v - 1)
                if all(_evaluate(c, padded).denominator == 1 for c in by_stage[v]):
                    survivors.append(cand)
        log.info("n=%d a%d: %d residue classes survive (period %d)", n, 2 * v + 3, len(survivors), periods[v])
        prefixes = survivors
    return sorted(prefixes)


def compute_generators(n: int, budget: int = DEFAULT_BUDGET) -> GeneratorSet:
    """A basis of the identity-component lattice isometries, twist first."""
    if n < 1:
        raise ValueError(f"generators are computed for n >= 1, got n={n}")
    if budget <= 0:
        raise ValueError("budget must be positive")
    k = odd_rank(n)
    log.debug("computing generators for n=%d with budget %d", n, budget)
    twist = twist_descriptor(n)
    generators = [twist]
    if k > 1:
        periods = [axis_period(n, i) for i in range(2, k + 1)]
        family = list(_residue_solutions(n, periods, budget))
        for v, b in enumerate(periods):
            family.append(tuple(Fraction(b) if i == v else Fraction(0) for i in range(k - 1)))
        for row in canonical_basis(family, k - 1):
            generators.append(IsometryDescriptor(n, 1, (Fraction(0),) + row))
    result = GeneratorSet.from_descriptors(n, generators)
    verify_generators(result)
    return result


def verify_generators(gs: GeneratorSet) -> None:
    gens = gs.generators
    if len(gens) != odd_rank(gs.n):
        raise VerificationError(f"expected {odd_rank(gs.n)} generators, got {len(gens)}")
    for g in gens:
        if not is_lattice_isometry(g):
            raise VerificationError(f"generator {g.odd} is not a lattice isometry")
        for p in primerange(2, gs.n + 2):
            if is_lattice_isometry(g.scaled(Fraction(1, int(p)))):
                raise VerificationError(f"generator {g.odd} is divisible by {p}")
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            for combo in (g.compose(h), g.compose(h.inverse())):
                if not is_lattice_isometry(combo) or not gs.contains(combo):
                    raise VerificationError(f"combination {combo.odd} left the lattice")


def classify_isometry(op: OperatorLike) -> IsometryDescriptor:
    """Recover sign and odd exponent of a real isometry of the Euler form."""
    m = as_matrix(op)
    n = m.n
    g = make_context(n).gram(m.basis)
    if linalg.matmul(linalg.matmul(linalg.transpose(m.entries), g), m.entries) != g:
        raise NotAnIsometry("M^T G M != G")
    ident = linalg.identity(n + 1)
    sign = None
    for s in (1, -1):
        shifted = linalg.sub(m.entries, linalg.scale(s, ident))
        if linalg.is_zero(linalg.matpow(shifted, n + 1)):
            sign = s
            break
    if sign is None:
        raise NotUnipotent("neither M nor -M is unipotent")
    poly = commutant_polynomial(OperatorMatrix(n, m.basis, linalg.scale(sign, m.entries)))
    if poly is None:
        raise InconsistencyError("isometry does not commute with D")
    exponent = series_log(poly)
    if not exponent.is_odd():
        raise InconsistencyError("logarithm of the isometry is not an odd polynomial in D")
    return IsometryDescriptor(n, sign, exponent.odd_coeffs())
