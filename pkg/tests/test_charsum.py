import pytest

from midconv import MulChar, make_field
from midconv.charsum import (char_sum, gauss_pair_identity_check, gauss_sum,
                             jacobi_gauss_relation_check, jacobi_sum)
from midconv.cyclo import CycloNum


@pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (7, 1), (3, 2), (2, 3)])
def test_gauss_absolute_value(p, m):
    B = make_field(p, m)
    for e in range(1, B.q - 1):
        chi = MulChar(B, 1, e)
        g = gauss_sum(chi)
        assert g * g.conj() == CycloNum.from_rational(B.q)
        assert gauss_pair_identity_check(chi)


def test_quadratic_gauss_sum_squared():
    # g(quadratic)^2 = chi(-1) q
    for p in (3, 5, 7, 11, 13):
        B = make_field(p, 1)
        chi = MulChar.quadratic(B)
        g = gauss_sum(chi)
        assert g * g == chi.at_minus_one() * p


def test_trivial_conventions(F7):
    triv = MulChar.trivial(F7)
    assert gauss_sum(triv) == CycloNum.from_rational(1)
    assert char_sum(MulChar(F7, 1, 2)).is_zero()
    # with chi(0) = 0 for all characters J(1, 1) = q - 2
    assert jacobi_sum(triv, triv) == CycloNum.from_rational(5)


def test_jacobi_relation(F7):
    for a in range(1, 6):
        for b in range(1, 6):
            if (a + b) % 6:
                assert jacobi_gauss_relation_check(MulChar(F7, 1, a), MulChar(F7, 1, b))


def test_jacobi_of_inverse_pair(F7):
    chi = MulChar(F7, 1, 2)
    assert jacobi_sum(chi, chi.inverse()) == -chi.at_minus_one()


def test_workers_do_not_change_results(F9):
    chi = MulChar(F9, 1, 3)
    assert gauss_sum(chi, workers=3) == gauss_sum(chi, workers=1)
    assert jacobi_sum(chi, chi, workers=2) == jacobi_sum(chi, chi)


def test_higher_level_character():
    B = make_field(3, 1)
    chi = MulChar(B, 3, 2)
    g = gauss_sum(chi)
    assert g * g.conj() == CycloNum.from_rational(27)
