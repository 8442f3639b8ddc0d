import pytest

from midconv import Conventions, LocalData, MulChar, PointOrbit, TameBlock, kummer_sheaf
from midconv.cyclo import CycloNum, one, root_of_unity
from midconv.errors import NotIrreducible, PointCollision, ZeroScalar
from midconv.localdata import (eigenspace_scalar, gr_M, kummer_scalar_at, merge_factors, tate_twist,
                               twist_block)


def test_point_orbit(F7):
    a = PointOrbit.rational(F7, 3)
    assert a.degree == 1 and a.rational_value() == 3
    assert a.contains(3) and not a.contains(2)
    # x^2 + 1 is irreducible mod 7 and x^2 - 1 is not
    PointOrbit(F7, (1, 0, 1)).validate()
    with pytest.raises(NotIrreducible):
        PointOrbit(F7, (6, 0, 1)).validate()
    with pytest.raises(NotIrreducible):
        PointOrbit(F7, (1, 2))


def test_quadratic_point_roots(F7):
    s = PointOrbit(F7, (1, 0, 1))
    r = s.roots()
    assert len(r) == 2
    assert (s.evaluate(r, 2) == 0).all()


def test_conventions_validate():
    Conventions("top", 0)
    with pytest.raises(ValueError):
        Conventions("1", 0)
    with pytest.raises(ValueError):
        Conventions("0", 2)


def test_block_validation(F7):
    chi = MulChar(F7, 1, 1)
    with pytest.raises(ZeroScalar):
        TameBlock(1, 1, chi, CycloNum.from_rational(0))
    with pytest.raises(ValueError):
        TameBlock(0, 1, chi, one())
    b = TameBlock(2, 1, chi, one(), 3)
    assert b.dim() == 6
    L = LocalData((b, TameBlock(1, 1, MulChar.trivial(F7), one())))
    assert L.rank() == 7 and L.invariant_dim() == 1


def test_graded_pieces_weights(F7):
    # a unipotent block J_3 has graded pieces alpha, alpha q, alpha q^2 in some order
    b = TameBlock(3, 1, MulChar.trivial(F7), one())
    scalars = sorted(p.scalar.to_rational() for p in gr_M(b, 1, F7))
    assert len(scalars) == 3
    assert scalars[1] / scalars[0] == scalars[2] / scalars[1] == 7


def test_eigenspace_scalar_depends_on_convention(F7):
    b = TameBlock(2, 1, MulChar.trivial(F7), one())
    e0 = eigenspace_scalar(b, 1, F7, Conventions("0", 1))
    etop = eigenspace_scalar(b, 1, F7, Conventions("top", 1))
    assert e0 != etop


def test_twists(F7):
    chi = MulChar(F7, 1, 2)
    b = TameBlock(1, 1, chi, root_of_unity(3, 1))
    assert twist_block(b, CycloNum.from_rational(2)).alpha == root_of_unity(3, 1) * 2
    L = LocalData((b,))
    assert tate_twist(L, 1, F7).blocks[0].alpha == root_of_unity(3, 1) / 7


def test_kummer_scalar(F7):
    chi = MulChar(F7, 1, 1)
    s = PointOrbit.rational(F7, 2)
    # chi(P_s(y)) with P_s = x - 2
    from midconv.field import char_eval
    assert kummer_scalar_at(chi, s, 5) == char_eval(chi, 3)
    with pytest.raises(PointCollision):
        kummer_scalar_at(chi, s, 2)


def test_merge_factors(F7):
    s = PointOrbit.rational(F7, 0)
    chi = MulChar(F7, 1, 2)
    assert merge_factors(F7, [(s, chi), (s, chi.inverse())]) == []
    assert merge_factors(F7, [(s, chi), (s, chi)]) == [(s, chi * chi)]


def test_kummer_sheaf_shape(F7):
    s0, s1 = PointOrbit.rational(F7, 0), PointOrbit(F7, (1, 0, 1))
    F = kummer_sheaf(F7, [(s0, MulChar(F7, 1, 3)), (s1, MulChar(F7, 1, 1))])
    assert F.rank == 1 and F.total_degree() == 3
    # the character at infinity is the inverse of the total degree-weighted product
    assert F.infinity_character() == MulChar(F7, 1, -(3 + 2 * 1))
    assert F.in_S(0) and not F.in_S(1)
    # a stalk determinant is the value of the Kummer function
    assert F.stalk_det(3) is not None
