from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qradial.cartan import CartanMatrix, integer_kernel, rho_doubled
from qradial.errors import IndexOutOfRange, NotSymmetrizable

MATRICES = [
    ((2,),),
    ((2, 0), (0, 2)),
    ((2, -1), (-1, 2)),
    ((2, -2), (-2, 2)),
    ((2, -1), (-2, 2)),  # B2
    ((2, -1), (-3, 2)),  # G2
    ((2, -1, 0), (-1, 2, -2), (0, -1, 2)),  # C3
]


@pytest.mark.parametrize("a", MATRICES)
def test_form_diagonal_and_symmetry(a):
    c = CartanMatrix(a)
    for i in range(1, c.n + 1):
        ai = c.alpha(i)
        assert c.bilinear(ai, ai) == 2 * c.eps[i - 1]
        for j in range(1, c.n + 1):
            assert c.form(i, j) == c.form(j, i)
            assert c.form(i, j) == c.eps[i - 1] * c.entry(i, j)


vectors = st.lists(st.integers(-6, 6), min_size=3, max_size=3).map(tuple)


@settings(max_examples=80, deadline=None)
@given(vectors, vectors)
def test_bilinear_symmetric_and_integral_on_q(x, y):
    c = CartanMatrix(MATRICES[-1])
    assert c.bilinear(x, y) == c.bilinear(y, x)
    # doubled vectors with even entries lie in Q
    xe = tuple(2 * v for v in x)
    ye = tuple(2 * v for v in y)
    assert c.bilinear(xe, ye).denominator == 1


def test_quarter_pairing_on_half_lattice():
    c = CartanMatrix(((2, -1), (-1, 2)))
    assert c.bilinear((1, 0), (0, 1)) == Fraction(-1, 4)


def test_symmetrizer_found():
    assert CartanMatrix(((2, -1), (-2, 2))).eps == (2, 1)
    assert CartanMatrix(((2, -1), (-3, 2))).eps == (3, 1)
    assert CartanMatrix(((2, 0), (0, 2))).eps == (1, 1)


def test_not_symmetrizable():
    with pytest.raises(NotSymmetrizable):
        CartanMatrix(((2, -1, -1), (-2, 2, -1), (-1, -1, 2)))
    with pytest.raises(NotSymmetrizable):
        CartanMatrix(((2, -1), (-1, 2)), eps=(1, 2))
    with pytest.raises(ValueError):
        CartanMatrix(((2, 1), (1, 2)))


def test_index_checks():
    c = CartanMatrix(((2, -1), (-1, 2)))
    with pytest.raises(IndexOutOfRange):
        c.alpha(3)
    with pytest.raises(IndexOutOfRange):
        c.weight((1, 0))


def test_finite_type_and_rho():
    assert CartanMatrix(((2, -1), (-1, 2))).is_finite_type()
    assert not CartanMatrix(((2, -2), (-2, 2))).is_finite_type()
    assert rho_doubled(CartanMatrix(((2, -1), (-1, 2)))) == (2, 2)
    assert rho_doubled(CartanMatrix(((2,),))) == (1,)


def test_integer_kernel():
    basis = integer_kernel([[1, 1, 0, 0], [0, 0, 1, 1]], 4)
    assert basis == [(1, -1, 0, 0), (0, 0, 1, -1)]
    for v in integer_kernel([[2, 3, 5]], 3):
        assert 2 * v[0] + 3 * v[1] + 5 * v[2] == 0
