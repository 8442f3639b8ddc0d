from fractions import Fraction

import numpy as np
import pytest

from midconv import MulChar, PointOrbit, make_field
from midconv.cyclo import CycloNum, root_of_unity
from midconv.errors import DimensionOverflow, UnknownStalk
from midconv.field import char_eval
from midconv.oracle import (Charpoly, ExplicitSheaf, charpoly_from_traces, charpoly_frobenius,
                            mc_charpoly, newton_elementary, recover_dimension_from, stalk_charpoly,
                            trace_point)


def _power_sums(roots, k):
    out = CycloNum.from_rational(0)
    for r in roots:
        out = out + r ** k
    return out


def test_newton_from_known_roots():
    roots = [root_of_unity(3, 1), CycloNum.from_rational(5), CycloNum.from_rational(-2)]
    fn = lambda k: _power_sums(roots, k)
    assert recover_dimension_from(fn) == 3
    cp = charpoly_from_traces(fn, 3)
    assert cp.det == roots[0] * roots[1] * roots[2]
    es = newton_elementary([fn(k) for k in (1, 2, 3)])
    assert es[1] == roots[0] + roots[1] + roots[2]


def test_dimension_overflow():
    with pytest.raises(DimensionOverflow):
        charpoly_from_traces(lambda k: CycloNum.from_rational(1), 40)


def _legendre(B):
    z, o = PointOrbit.rational(B, 0), PointOrbit.rational(B, 1)
    eps = MulChar.quadratic(B)
    return ExplicitSheaf(B, ((z, eps), (o, eps)))


def _elliptic_trace(p, lam):
    # a_p of y^2 = x(x - 1)(x - lam) by counting
    sq = {(x * x) % p for x in range(1, p)}
    leg = lambda v: 0 if v % p == 0 else (1 if v % p in sq else -1)
    return -sum(leg(x * (x - 1) * (x - lam)) for x in range(p))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_legendre_convolution_matches_point_counts(p):
    # MC of the quadratic Kummer sheaf at 0 and 1 is the Legendre family
    B = make_field(p, 1)
    E = _legendre(B)
    eps = MulChar.quadratic(B)
    sign = (-1) ** ((p - 1) // 2)
    for lam in range(2, p):
        tr = E.to_cyclo(E.mc_stalk_power_sum(eps, lam, 1))
        assert tr == CycloNum.from_rational(sign * _elliptic_trace(p, lam))
        cp = mc_charpoly(E, eps, lam)
        assert cp.degree == 2
        assert cp.det == CycloNum.from_rational(p)


def test_kummer_stalks(F7):
    s = PointOrbit.rational(F7, 0)
    chi = MulChar(F7, 1, 1)
    E = ExplicitSheaf(F7, ((s, chi),))
    for x in range(1, 7):
        assert trace_point(E, x) == char_eval(chi, x)
    assert trace_point(E, 0).is_zero()
    assert stalk_charpoly(E, 3).det == char_eval(chi, 3)


def test_h1c_dimension_of_kummer(F7):
    # rank one on A^1 minus {0, 6, y}: Euler characteristic -2, no H^0_c or H^2_c
    s0, s1 = PointOrbit.rational(F7, 0), PointOrbit.rational(F7, 6)
    E = ExplicitSheaf(F7, ((s0, MulChar(F7, 1, 3)), (s1, MulChar(F7, 1, 2))))
    cp = charpoly_frobenius(E, MulChar(F7, 1, 1), 3)
    assert cp.degree == 2


def test_charpoly_twist():
    cp = Charpoly([CycloNum.from_rational(1), CycloNum.from_rational(3), CycloNum.from_rational(2)])
    tw = cp.twisted(CycloNum.from_rational(2))
    assert tw.det == CycloNum.from_rational(8)
    assert tw.es[1] == CycloNum.from_rational(6)
