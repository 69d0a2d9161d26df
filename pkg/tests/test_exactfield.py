from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kirbylab.exactfield import (
    DescriptorMismatch,
    DivisionByZero,
    FieldDescriptor,
    NoSuchRoot,
    cyclotomic,
    cyclotomic_polynomial,
    prime,
    primitive_root,
    rationals,
    root_order,
)

FIELDS = [rationals(), cyclotomic(3), cyclotomic(4), cyclotomic(5), cyclotomic(6), prime(7), prime(11)]
small = st.integers(-6, 6)


def element(fld, coords):
    return fld.from_coords([c for c in coords[: fld.degree]] + [0] * (fld.degree - len(coords)))


@pytest.mark.parametrize("fld", FIELDS, ids=str)
@settings(max_examples=40, deadline=None)
@given(a=st.lists(small, min_size=4, max_size=4), b=st.lists(small, min_size=4, max_size=4), c=st.lists(small, min_size=4, max_size=4))
def test_field_axioms(fld, a, b, c):
    x, y, w = element(fld, a), element(fld, b), element(fld, c)
    assert (x + y) * w == x * w + y * w
    assert (x * y) * w == x * (y * w)
    assert x * y == y * x
    assert x - x == fld.zero()
    if not x.is_zero():
        assert x * x.inverse() == fld.one()
        assert (y / x) * x == y


@pytest.mark.parametrize("fld", FIELDS, ids=str)
@settings(max_examples=25, deadline=None)
@given(a=st.lists(small, min_size=4, max_size=4))
def test_json_round_trip(fld, a):
    x = element(fld, a)
    assert fld.parse(x.to_json()) == x
    assert FieldDescriptor.from_json(fld.to_json()) == fld


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert len(cyclotomic_polynomial(12)) - 1 == 4


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 10, 12])
def test_primitive_roots_in_cyclotomic(m):
    K = cyclotomic(m)
    w = primitive_root(m, K)
    assert root_order(w) == m


def test_roots_in_prime_fields():
    w = primitive_root(6, prime(7))
    assert root_order(w) == 6
    with pytest.raises(NoSuchRoot):
        primitive_root(4, prime(7))
    # Q(zeta_5) contains -zeta_5 of order 10
    assert root_order(primitive_root(10, cyclotomic(5))) == 10


def test_gaussian_integers():
    K = cyclotomic(4)
    i = K.gen()
    assert i * i == K(-1)
    assert i.inverse() == i ** 3
    assert (i ** -1) == -i


def test_rational_coercion_and_approx():
    Q = rationals()
    assert Q(Fraction(1, 3)) + Fraction(1, 6) == Q(Fraction(1, 2))
    w = cyclotomic(6).gen()
    assert abs(w.approx() - complex(0.5, 3 ** 0.5 / 2)) < 1e-12


def test_errors():
    with pytest.raises(DivisionByZero):
        cyclotomic(3).zero().inverse()
    with pytest.raises(ZeroDivisionError):
        prime(5).one() / prime(5).zero()
    with pytest.raises(DescriptorMismatch):
        cyclotomic(3).one() + cyclotomic(4).one()


def test_prime_field_arithmetic():
    F = prime(7)
    assert F(3) * F(5) == F(1)
    assert F(3).inverse() == F(5)
    assert F.characteristic == 7
