from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from exforge.scalars import Cyclo, CycloError, cyclotomic_coeffs, euler_phi, root_of_unity

ORDERS = [1, 3, 4, 5, 8, 12, 15, 24, 40]

small = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def cyclos(draw, order=None):
    n = order or draw(st.sampled_from(ORDERS))
    cs = draw(st.lists(small, min_size=euler_phi(n), max_size=euler_phi(n)))
    return Cyclo(cs, n)


def test_omega_sum():
    w = root_of_unity(1, 3)
    assert w + w * w == -1


def test_i_squared():
    i = root_of_unity(1, 4)
    assert i * i == -1
    assert i ** 4 == 1


def test_omega_difference_squared():
    w = root_of_unity(1, 3)
    assert (w - w * w) ** 2 == -3


def test_roots_of_unity():
    assert root_of_unity(0, 1) == 1
    assert root_of_unity(1, 8) ** 2 == root_of_unity(1, 4)
    z = root_of_unity(2, 12)
    assert z ** 6 == 1 and z ** 3 != 1 and z ** 2 != 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 7, 8, 9, 12, 15, 20, 24, 40, 60, 120])
def test_cyclotomic_polynomial_vanishes(n):
    z = root_of_unity(1, n)
    total = Cyclo(0, n)
    for k, c in enumerate(cyclotomic_coeffs(n)):
        total = total + z ** k * c
    assert total.is_zero()


def test_errors():
    with pytest.raises(ZeroDivisionError):
        Cyclo(0, 5).inverse()
    with pytest.raises(ZeroDivisionError):
        Cyclo(1) / Cyclo(0, 3)
    with pytest.raises(CycloError):
        root_of_unity(1, 121)
    with pytest.raises(CycloError):
        root_of_unity(1, 8) * root_of_unity(1, 5) * root_of_unity(1, 7)


def test_rationality_and_json():
    x = Cyclo([Fraction(1, 3), 2], 5)
    assert not x.is_rational()
    assert Cyclo(Fraction(-7, 2), 8).is_rational()
    assert Cyclo.from_json(x.to_json()) == x


@given(cyclos(), cyclos(), cyclos())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@given(cyclos(order=3), cyclos(order=4), st.sampled_from([12, 24, 60, 120]))
def test_lift_commutes_with_arithmetic(a, b, n):
    assert (a * b).lift(n) == a.lift(n) * b.lift(n)
    assert (a + b).lift(n) == a.lift(n) + b.lift(n)
