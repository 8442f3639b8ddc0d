import pytest

from midconv import PINNED, MulChar, PointOrbit, kummer_sheaf, make_field
from midconv.cyclo import CycloNum
from midconv.epsilon import EpsilonContext, det_h1c, det_mc, epsilon0_point, kernel_det
from midconv.errors import NotStandardSituation, PointInS, TrivialConvolutionChar
from midconv.mc import (infinity_consistent, local_det_consistent, mc_block, mc_rank, mc_sheaf,
                        rigidity_index)
from midconv.localdata import TameBlock
from midconv.charsum import jacobi_sum
from midconv.oracle import ExplicitSheaf, charpoly_frobenius, mc_charpoly


def _kummer(B, spec):
    fac = [(PointOrbit.rational(B, a), MulChar(B, 1, e)) for a, e in spec]
    return kummer_sheaf(B, fac), ExplicitSheaf(B, tuple(fac))


@pytest.fixture(scope="module")
def kum7():
    B = make_field(7, 1)
    F, E = _kummer(B, [(0, 3), (6, 2)])
    # infinity carries the inverse of the product: chi_inf = -(3 + 2) = 1
    return B, F, E, MulChar(B, 1, 1)


def test_det_h1c_matches_oracle(kum7):
    B, F, E, chi = kum7
    for y in (2, 3, 5):
        cp = charpoly_frobenius(E, chi, y)
        assert det_h1c(F, chi, y) == cp.det


def test_det_mc_matches_oracle(kum7):
    B, F, E, chi = kum7
    r = mc_rank(F, chi)
    for y in (1, 3, 4):
        cp = mc_charpoly(E, chi, y)
        assert cp.degree == r
        assert det_mc(F, chi, y) == cp.det
        assert det_h1c(F, chi, y) == det_mc(F, chi, y) * kernel_det(F, chi, y)


def test_not_standard_and_point_in_S(kum7):
    B, F, E, chi = kum7
    with pytest.raises(NotStandardSituation):
        det_h1c(F, MulChar(B, 1, 2), 3)
    with pytest.raises(PointInS):
        det_h1c(F, chi, 0)


def test_epsilon_omega_signs(kum7):
    B, F, E, chi = kum7
    L = F.local(F.points[0])
    one = CycloNum.from_rational(1)
    a = epsilon0_point(L, one, B, "dpi")
    b = epsilon0_point(L, one, B, "-dpi")
    # rank one, n = l = 1: changing the differential by -1 multiplies by chi(-1)
    assert len(L.blocks) == 1
    assert b == a * L.blocks[0].chi.at_minus_one()
    assert L.blocks[0].chi.at_minus_one() == CycloNum.from_rational(-1)


def test_mc_sheaf_consistency(kum7):
    B, F, E, chi = kum7
    G = mc_sheaf(F, chi)
    assert G.rank == mc_rank(F, chi)
    for s in G.points:
        assert local_det_consistent(G, s)
    assert infinity_consistent(G)


def test_mc_block_jacobi_rule(F7):
    chi = MulChar(F7, 1, 1)
    eta = MulChar(F7, 1, 2)
    b = TameBlock(1, 1, eta, CycloNum.from_rational(1))
    out = mc_block(b, 1, chi, F7)
    assert out.chi == chi * eta
    assert out.alpha == -jacobi_sum(chi, eta)
    with pytest.raises(TrivialConvolutionChar):
        mc_block(b, 1, MulChar.trivial(F7), F7)


def test_mc_block_cancelled_character(F7):
    # chi times its inverse leaves a unipotent block; its scalar is a Tate twist
    chi = MulChar(F7, 1, 2)
    b = TameBlock(1, 1, chi.inverse(), CycloNum.from_rational(1))
    out = mc_block(b, 1, chi, F7)
    assert out.trivial
    assert out.alpha == chi.at_minus_one() * 7


def test_legendre_rigidity():
    B = make_field(7, 1)
    eps = MulChar.quadratic(B)
    z, o = PointOrbit.rational(B, 0), PointOrbit.rational(B, 1)
    F = kummer_sheaf(B, [(z, eps), (o, eps)])
    G = mc_sheaf(F, eps, require_standard=False)
    assert G.rank == 2
    assert rigidity_index(G) == 2
    assert rigidity_index(F) == 2


def test_involution_rank(kum7):
    B, F, E, chi = kum7
    G = mc_sheaf(F, chi)
    H = mc_sheaf(G, chi.inverse(), require_standard=False)
    assert H.rank == F.rank
    assert sorted(s.to_json() for s in H.points) == sorted(s.to_json() for s in F.points)
