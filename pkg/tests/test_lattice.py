from __future__ import annotations

import random
from fractions import Fraction

import pytest

from k0lattice import linalg
from k0lattice.errors import DimensionMismatch, NotALatticeClass
from k0lattice.lattice import (
    BasisTag,
    K0Class,
    chi,
    convert,
    euler_characteristic,
    from_coeffs,
    gram_matrix,
    hilbert_polynomial,
    is_lattice,
    line_bundle,
    make_context,
    point_class,
    rank_c1,
    structure_sheaf,
    zero_class,
)


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def test_gram_line_bundle_n2():
    g = gram_matrix(2)
    assert g.entries == (F(1, 3, 6), F(0, 1, 3), F(0, 0, 1))


def test_gram_n0_and_n3_corner():
    assert gram_matrix(0).entries == (F(1),)
    assert gram_matrix(3).entry(0, 3) == 20


@pytest.mark.parametrize("n", range(0, 7))
def test_lattice_bases_have_unimodular_integral_grams(n):
    for basis in (BasisTag.LINE_BUNDLE, BasisTag.STRUCTURE_SHEAF):
        g = gram_matrix(n, basis).entries
        assert linalg.is_integral_matrix(g)
        assert abs(linalg.det(g)) == 1


def test_negative_dimension_rejected():
    with pytest.raises(ValueError):
        make_context(-1)


def test_line_bundle_in_structure_sheaf_coordinates():
    assert line_bundle(2, 2).ss == F(3, 2, 1)
    # O(-1) on P^2 has Hilbert polynomial t(t+1)/2 = gamma_2 - gamma_1
    assert line_bundle(2, -1).ss == F(0, -1, 1)


def test_convert_keeps_the_element():
    e = line_bundle(3, 2)
    for basis in BasisTag:
        assert convert(e, basis) == e
        assert convert(e, basis).basis is basis
    assert line_bundle(2, 1) == line_bundle(2, 1).to(BasisTag.STRUCTURE_SHEAF)


def test_line_bundle_basis_index_is_twist():
    e = from_coeffs(3, BasisTag.LINE_BUNDLE, [0, 0, 1, 0])
    assert e == line_bundle(3, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chi_of_line_bundles_is_binomial(n):
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert chi(line_bundle(n, a), line_bundle(n, b)) == linalg.binom(n + b - a, n)


def test_chi_fixtures():
    assert chi(line_bundle(2, 0), line_bundle(2, 1)) == 3
    assert chi(line_bundle(1, -1), line_bundle(1, 0)) == 2


def test_chi_is_basis_independent():
    rng = random.Random(7)
    n = 4
    for _ in range(20):
        x = K0Class(n, BasisTag.STRUCTURE_SHEAF, [rng.randint(-5, 5) for _ in range(n + 1)])
        y = K0Class(n, BasisTag.HILBERT, [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n + 1)])
        g = gram_matrix(n, BasisTag.STRUCTURE_SHEAF).entries
        xs, ys = x.ss, y.ss
        direct = sum(xs[i] * g[i][j] * ys[j] for i in range(n + 1) for j in range(n + 1))
        assert chi(x, y) == direct


def test_chi_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        chi(line_bundle(2), line_bundle(3))


def test_arithmetic():
    n = 3
    e = line_bundle(n, 0) - line_bundle(n, -1)
    # O - O(-1) = O_H, the hyperplane
    assert e == structure_sheaf(n, n - 1)
    assert 2 * e == e + e
    assert -e + e == zero_class(n)
    assert Fraction(1, 2) * e * 2 == e
    with pytest.raises(DimensionMismatch):
        line_bundle(2) + line_bundle(3)


def test_structure_sheaf_range():
    with pytest.raises(ValueError):
        structure_sheaf(3, 4)
    with pytest.raises(ValueError):
        structure_sheaf(3, -1)


def test_wrong_coefficient_count():
    with pytest.raises(ValueError):
        K0Class(2, BasisTag.LINE_BUNDLE, [1, 2])


def test_is_lattice():
    assert is_lattice(line_bundle(4, -7))
    assert not is_lattice(Fraction(1, 2) * point_class(4))
    # gamma_2 = (t^2 + 3t + 2)/2 is a lattice class with rational monomial coefficients
    assert is_lattice(from_coeffs(2, BasisTag.HILBERT, [1, Fraction(3, 2), Fraction(1, 2)]))
    assert not is_lattice(from_coeffs(2, BasisTag.HILBERT, [0, Fraction(1, 2), 0]))


def test_rank_c1():
    assert rank_c1(line_bundle(3, 3)) == (1, 3)
    assert rank_c1(line_bundle(3, -2)) == (1, -2)
    assert rank_c1(point_class(3)) == (0, 0)
    assert rank_c1(structure_sheaf(3, 2)) == (0, 1)
    assert rank_c1(line_bundle(0, 5)) == (1, 0)
    with pytest.raises(NotALatticeClass):
        rank_c1(Fraction(1, 3) * line_bundle(2))


def test_hilbert_polynomial_and_euler_characteristic():
    assert hilbert_polynomial(point_class(3)) == F(1, 0, 0, 0)
    # gamma_1(t) = t + 1
    assert hilbert_polynomial(structure_sheaf(2, 1)) == F(1, 1, 0)
    assert euler_characteristic(line_bundle(2, 2)) == 6
    assert euler_characteristic(line_bundle(3, -1)) == 0
    assert euler_characteristic(line_bundle(1, -3)) == -2


def test_euler_characteristic_is_chi_from_structure_sheaf():
    e = line_bundle(3, 2) + 3 * point_class(3)
    assert euler_characteristic(e) == chi(line_bundle(3), e)
