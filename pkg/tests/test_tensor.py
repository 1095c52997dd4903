from __future__ import annotations

import random
from fractions import Fraction

import pytest

from k0lattice import linalg
from k0lattice.errors import DimensionMismatch, NotInCommutant
from k0lattice.lattice import BasisTag, K0Class, chi, line_bundle, make_context, point_class, structure_sheaf
from k0lattice.operators import (
    OperatorMatrix,
    OperatorSeries,
    apply,
    d_operator,
    kappa_from_gram,
    monomial,
    series_exp,
)
from k0lattice.tensor import (
    canonical_class,
    from_nabla_coords,
    nabla_coords,
    operator_class,
    restrict_hyperplane,
    shift_series,
    tensor,
    tensor_power,
    twist,
    twisted_subspace_class,
)


def basis_classes(n: int) -> list[K0Class]:
    return [line_bundle(n, i) for i in range(n + 1)] + [structure_sheaf(n, j) for j in range(n + 1)]


@pytest.mark.parametrize("n", range(1, 9))
def test_operators_in_d_act_by_tensoring(n):
    rng = random.Random(n)
    series = [
        d_operator(n),
        monomial(n, 3),
        series_exp(monomial(n, 3)),
        OperatorSeries(n, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n + 1)]),
    ]
    for s in series:
        f = operator_class(s)
        for e in basis_classes(n):
            assert apply(s, e) == tensor(e, f)


@pytest.mark.parametrize("n", range(0, 7))
def test_twisted_subspace_closed_form(n):
    for k in range(-5, 6):
        for m in range(n + 1):
            assert tensor(line_bundle(n, k), structure_sheaf(n, m)) == twisted_subspace_class(n, k, m)


def test_twisted_subspace_range():
    with pytest.raises(ValueError):
        twisted_subspace_class(3, 0, 4)


def test_structure_sheaf_is_the_unit():
    rng = random.Random(2)
    n = 4
    o = line_bundle(n)
    for _ in range(10):
        e = K0Class(n, BasisTag.LINE_BUNDLE, [rng.randint(-4, 4) for _ in range(n + 1)])
        assert tensor(o, e) == e
        assert tensor(e, o) == e


def test_line_bundles_multiply():
    for n in (1, 3, 5):
        for a in range(-2, 3):
            for b in range(-2, 3):
                assert tensor(line_bundle(n, a), line_bundle(n, b)) == line_bundle(n, a + b)


def test_tensor_is_commutative_and_keeps_left_basis():
    n = 3
    e = line_bundle(n, 2).to(BasisTag.LINE_BUNDLE)
    f = structure_sheaf(n, 1) + 3 * point_class(n)
    assert tensor(e, f) == tensor(f, e)
    assert tensor(e, f).basis is BasisTag.LINE_BUNDLE


def test_points_square_to_zero():
    n = 3
    assert tensor(point_class(n), point_class(n)).ss == (0,) * (n + 1)
    # two hyperplanes meet in a codimension-2 subspace
    assert tensor(structure_sheaf(n, 2), structure_sheaf(n, 2)) == structure_sheaf(n, 1)


def test_tensor_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tensor(line_bundle(2), line_bundle(3))


def test_nabla_coords_round_trip():
    e = line_bundle(3, 2)
    assert nabla_coords(e) == tuple(reversed(e.ss))
    assert from_nabla_coords(3, nabla_coords(e)) == e
    with pytest.raises(ValueError):
        from_nabla_coords(3, [1, 2])


def test_twist_and_shift():
    n = 4
    for k in range(-3, 4):
        for m in range(-2, 3):
            assert twist(line_bundle(n, k), m) == line_bundle(n, k + m)
    assert operator_class(shift_series(n, 2)) == line_bundle(n, 2)


def test_tensor_power():
    assert tensor_power(line_bundle(3, 1), 3) == line_bundle(3, 3)
    assert tensor_power(point_class(3), 0) == line_bundle(3)
    with pytest.raises(ValueError):
        tensor_power(line_bundle(3, 1), -1)


def test_restrict_hyperplane():
    n = 3
    assert restrict_hyperplane(line_bundle(n)) == structure_sheaf(n, n - 1)
    assert restrict_hyperplane(line_bundle(n, 1)) == tensor(line_bundle(n, 1), structure_sheaf(n, n - 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_operator_class_of_kappa_matrix(n):
    assert operator_class(kappa_from_gram(n)) == (-1) ** n * canonical_class(n)


def test_operator_class_rejects_non_commuting_matrix():
    m = OperatorMatrix(1, BasisTag.STRUCTURE_SHEAF, [[0, 0], [1, 0]])
    with pytest.raises(NotInCommutant):
        operator_class(m)


def random_integer_class(rng: random.Random, n: int) -> K0Class:
    return K0Class(n, BasisTag.LINE_BUNDLE, [rng.randint(-5, 5) for _ in range(n + 1)])


@pytest.mark.parametrize("n", range(0, 9))
def test_serre_duality_through_canonical_class(n):
    rng = random.Random(300 + n)
    omega = canonical_class(n)
    sign = (-1) ** n
    for _ in range(100):
        e, f = random_integer_class(rng, n), random_integer_class(rng, n)
        assert chi(e, f) == sign * chi(f, tensor(e, omega))


@pytest.mark.parametrize("n", range(0, 9))
def test_twisting_by_canonical_class_is_a_lattice_isometry(n):
    omega = canonical_class(n)
    s = shift_series(n, -(n + 1))
    assert operator_class(s) == omega
    m = s.matrix(BasisTag.LINE_BUNDLE)
    assert m.is_integral()
    g = make_context(n).gram(BasisTag.LINE_BUNDLE)
    assert linalg.matmul(linalg.matmul(linalg.transpose(m.entries), g), m.entries) == g
    for i in range(n + 1):
        assert apply(m, line_bundle(n, i)) == tensor(line_bundle(n, i), omega)


@pytest.mark.parametrize("n", range(0, 9))
def test_tensor_ring_laws(n):
    rng = random.Random(500 + n)

    def rational_class():
        return K0Class(n, BasisTag.STRUCTURE_SHEAF, [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n + 1)])

    for _ in range(20):
        e, f, g = rational_class(), rational_class(), rational_class()
        assert tensor(tensor(e, f), g) == tensor(e, tensor(f, g))
        assert tensor(e, f + g) == tensor(e, f) + tensor(e, g)
        assert tensor(e, f) == tensor(f, e)
