from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from midconv.cyclo import (CycloNum, cyclotomic_poly, euler_phi, is_signed_q_power, one,
                           root_of_unity, zero)
from midconv.errors import ZeroInput

small_N = st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 12, 15])


@st.composite
def elements(draw, N=None):
    N = N or draw(small_N)
    terms = draw(st.lists(st.tuples(st.integers(0, 2 * N), st.integers(-5, 5)), max_size=5))
    return CycloNum.from_terms(N, terms)


def test_cyclotomic_poly_small():
    assert list(cyclotomic_poly(1)) == [-1, 1]
    assert list(cyclotomic_poly(4)) == [1, 0, 1]
    assert list(cyclotomic_poly(6)) == [1, -1, 1]
    assert len(cyclotomic_poly(12)) - 1 == euler_phi(12) == 4


def test_roots_of_unity_sum_to_zero():
    for N in (2, 3, 5, 6, 12):
        s = zero()
        for k in range(N):
            s = s + root_of_unity(N, k)
        assert s.is_zero()


def test_mixed_conductors_compare_equal():
    # zeta_6^2 is zeta_3
    assert root_of_unity(6, 2) == root_of_unity(3, 1)
    assert root_of_unity(42, 7) == root_of_unity(6, 1)
    assert root_of_unity(4, 2) == CycloNum.from_rational(-1)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_ring_axioms(data):
    N = data.draw(small_N)
    a, b, c = (data.draw(elements(N)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@settings(max_examples=40, deadline=None)
@given(elements())
def test_inverse(a):
    if a.is_zero():
        return
    assert a * a.inv() == one()


@settings(max_examples=40, deadline=None)
@given(elements())
def test_conjugation_is_multiplicative_norm(a):
    n = a * a.conj()
    assert n == n.conj()
    assert complex(n.approx()).real >= -1e-9


def test_approx_matches_exact():
    z = root_of_unity(8, 1)
    w = complex(z.approx())
    assert abs(w - complex(2 ** -0.5, 2 ** -0.5)) < 1e-12
    # arbitrary precision goes through mpmath
    pytest.importorskip("mpmath")
    w2 = z.approx(prec=50)
    assert abs(complex(w2) - w) < 1e-12


def test_signed_q_power():
    assert is_signed_q_power(CycloNum.from_rational(-49), 7) == (-1, 2)
    assert is_signed_q_power(CycloNum.from_rational(Fraction(1, 9)), 3) == (1, -2)
    assert is_signed_q_power(CycloNum.from_rational(6), 3) is None
    assert is_signed_q_power(root_of_unity(3, 1), 3) is None
    with pytest.raises(ZeroInput):
        is_signed_q_power(zero(), 5)


def test_json_roundtrip():
    z = CycloNum.from_terms(12, [(1, Fraction(3, 2)), (5, -1)])
    assert CycloNum.from_json(z.to_json()) == z
