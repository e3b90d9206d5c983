from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kmodular.rings import F2, QQ, ZZ, Ring, get_ring


def test_units():
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)
    assert QQ.is_unit(Fraction(2, 3)) and not QQ.is_unit(0)
    assert F2.is_unit(3) and not F2.is_unit(4)


def test_inverse_of_non_unit_raises():
    with pytest.raises(ZeroDivisionError):
        ZZ.inv(2)


def test_fields():
    assert QQ.is_field and F2.is_field and not ZZ.is_field


def test_unknown_ring():
    with pytest.raises(ValueError):
        Ring("R")


def test_lookup_by_name():
    assert get_ring("F2") is F2
    assert get_ring(QQ) is QQ


@given(st.integers(-10**6, 10**6))
def test_f2_normalizes_mod_two(x):
    assert F2.normalize(x) == x % 2


@given(st.fractions())
def test_rational_json_round_trip(x):
    assert QQ.from_json(QQ.to_json(x)) == x


@given(st.integers(-50, 50).filter(bool))
def test_rational_inverse(x):
    assert QQ.inv(x) * x == 1
