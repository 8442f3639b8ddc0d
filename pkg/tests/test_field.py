import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from midconv import MulChar, make_field
from midconv.errors import DegreeMismatch, NotPrime, SizeLimitExceeded
from midconv.field import (char_eval, is_irreducible_fp, least_irreducible, norm, set_size_limit,
                           size_limit)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 2), (7, 1), (3, 4)])
def test_level_field_axioms(p, n):
    F = make_field(p, 1).level(n)
    x = F.elements()
    nz = x[1:]
    assert (F.mul(nz, F.inv(nz)) == 1).all()
    assert (F.add(x, F.neg(x)) == 0).all()
    # the generator really has full order
    assert len(set(F.exp.tolist())) == F.order
    # Frobenius is additive
    a, b = x[: F.size // 2], x[F.size // 2: F.size // 2 * 2]
    assert (F.power(F.add(a, b), p) == F.add(F.power(a, p), F.power(b, p))).all()


def test_least_irreducible_is_irreducible():
    for p, n in [(2, 4), (3, 3), (5, 2), (7, 2)]:
        assert is_irreducible_fp(least_irreducible(p, n), p)


def test_not_prime():
    with pytest.raises(NotPrime):
        make_field(9, 1)


def test_size_limit():
    old = size_limit()
    try:
        set_size_limit(100)
        with pytest.raises(SizeLimitExceeded):
            make_field(11, 1).level(2)
    finally:
        set_size_limit(old)


def test_norm_compatible_generators(F7):
    # the level-k generator maps to the base generator under the norm
    for k in (2, 3):
        Fk = F7.level(k)
        assert int(norm(F7, Fk.generator, k)) == int(F7.embed(F7.level(1).generator, 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.integers(1, 6), st.integers(1, 6))
def test_character_multiplicative(e, x, y):
    B = make_field(7, 1)
    chi = MulChar(B, 1, e)
    F = B.level(1)
    assert char_eval(chi, int(F.mul(x, y))) == char_eval(chi, x) * char_eval(chi, y)


def test_pullback_is_character_of_norm(F5):
    chi = MulChar(F5, 1, 1)
    psi = chi.pullback(2)
    F2 = F5.level(2)
    for x in range(1, F2.size, 3):
        assert char_eval(psi, x) == char_eval(chi, int(norm(F5, x, 2)))
    assert psi.descends() == chi


def test_pullback_only_from_base(F5):
    with pytest.raises(DegreeMismatch):
        MulChar(F5, 2, 1).pullback(4)


def test_character_basics(F7):
    assert MulChar.quadratic(F7).order() == 2
    assert MulChar.of_order(F7, 3).order() == 3
    assert MulChar(F7, 1, 2).inverse().e == 4
    assert MulChar.quadratic(F7).at_minus_one() == char_eval(MulChar.quadratic(F7), 6)
    with pytest.raises(ValueError):
        MulChar.of_order(F7, 4)
    with pytest.raises(DegreeMismatch):
        char_eval(MulChar(F7, 1, 1), 7)
    assert char_eval(MulChar(F7, 1, 1), 0).is_zero()
