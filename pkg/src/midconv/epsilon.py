"""Local epsilon constants of tame data and the global Frobenius determinants
of H^1_c(U_y, F (x) L_chi(y - x)) and of the middle convolution stalk.

The differential is omega_0 = -dx; at a finite point with uniformizer
pi = x - x_s this is -d(pi).  Infinity scalars are relative to u = 1/x.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .charsum import gauss_sum
from .cyclo import CycloNum, is_signed_q_power, one
from .errors import (HypothesisFailed, MissingStalkDet, NotStandardSituation,
                     PointInS, UnknownInvariantScalar)
from .field import MulChar
from .localdata import (PINNED, eigenspace_scalar, gr_M, kummer_scalar_at,
                        twist_block)


@dataclass(frozen=True)
class EpsilonContext:
    base: object
    conventions: object = PINNED
    omega: str = "-dx"


@lru_cache(maxsize=4096)
def _gauss(chi):
    return gauss_sum(chi)


def _q(q, k):
    return CycloNum.from_rational(Fraction(q) ** k)


def _unit_factor(chi):
    """-chi(-1) g(chi); equals -1 for trivial chi."""
    if chi.is_trivial():
        return CycloNum.from_rational(-1)
    return -(chi.at_minus_one() * _gauss(chi))


def epsilon0_block(b, degree, base, omega="dpi"):
    """q_s^(l n(n-1)/2) (-chi(-1) g(chi) alpha)^n, for every copy of the block.

    omega = "-dpi" multiplies by det_V(-1), turning -chi(-1) g into -g.
    """
    if b.alpha is None:
        raise UnknownInvariantScalar("epsilon factor of a block with unknown scalar")
    qs = base.q ** degree
    val = _q(qs, b.l * b.n * (b.n - 1) // 2 * b.mult) * _unit_factor(b.chi) ** (b.n * b.mult) * b.alpha ** b.n
    if omega == "-dpi":
        sign = b.chi.at_minus_one() if b.l % 2 else one()
        val = val * sign ** (b.n * b.mult)
    return val


def epsilon0_block_graded(b, degree, base):
    """The same constant assembled piece by piece from Gr^M."""
    val = one()
    for piece in gr_M(b, degree, base):
        val = val * _unit_factor(piece.chi) ** piece.mult * piece.scalar
    return val


def epsilon0_point(L, beta, base, omega="dpi"):
    val = one()
    for b in L.blocks:
        val = val * epsilon0_block(twist_block(b, beta), L.degree, base, omega)
    return val


def _require_standard(F, chi):
    if not F.is_standard(chi):
        raise NotStandardSituation(f"infinity data is not scalar L_chi for chi = {chi.e}")


def infinity_det(F, chi):
    """det(Frob_inf) on the infinity fibre of F (x) L_chi(y - x)."""
    D = F.infinity_det()
    if D is None:
        raise UnknownInvariantScalar("infinity scalars unknown")
    return chi.at_minus_one() ** F.rank * D


def det_h1c(F, chi, y, ctx=None):
    """det(Frob_q, H^1_c(U_y, F (x) L_chi(y - x))) for a rational y outside S."""
    ctx = ctx or EpsilonContext(F.base)
    _require_standard(F, chi)
    if F.in_S(y):
        raise PointInS(f"y = {y} is a singular point")
    Dy = F.stalk_det(y)
    if Dy is None:
        raise MissingStalkDet(f"no stalk determinant at y = {y}")
    base = F.base
    r = F.rank
    d = r * F.total_degree()
    Dinf = F.infinity_det()
    if Dinf is None:
        raise UnknownInvariantScalar("infinity scalars unknown")
    val = _q(base.q, -r) * Dinf.inv()
    val = val * (-_gauss(chi)) ** r * Dy
    if (d + r) % 2:
        val = -val
    for s, L in F.singular:
        kappa = kummer_scalar_at(chi, s, y)
        val = val * epsilon0_point(L, kappa, base, omega="-dpi")
    return val


def kernel_det(F, chi, y, ctx=None):
    """Determinant of the kernel of H^1_c -> MC_chi(F)_y: invariants at S and infinity."""
    ctx = ctx or EpsilonContext(F.base)
    base = F.base
    val = infinity_det(F, chi)
    for s, L in F.singular:
        kappa = kummer_scalar_at(chi, s, y)
        for b in L.blocks:
            if not b.trivial:
                continue
            E = eigenspace_scalar(b, s.degree, base, ctx.conventions)
            if E is None:
                raise UnknownInvariantScalar(f"invariant scalar unknown at {s}")
            sign = -1 if (s.degree - 1) * b.mult % 2 else 1
            val = val * E * kappa ** b.mult * sign
    return val


def det_mc(F, chi, y, ctx=None):
    """det(Frob_q, MC_chi(F)_y) for a rational y outside S."""
    return det_h1c(F, chi, y, ctx) / kernel_det(F, chi, y, ctx)


def invariant_stalk_det(F, s, conv=PINNED):
    """det(Frob_s) on the stalk of j_*F at s: the invariant lines."""
    val = one()
    for b in F.local(s).blocks:
        if b.trivial:
            E = eigenspace_scalar(b, s.degree, F.base, conv)
            if E is None:
                return None
            val = val * E
    return val


def middle_stalk_det(F, y, conv=PINNED):
    """det(Frob_y, (j_*F)_y) at a rational y, inside or outside S."""
    for s in F.points:
        if s.degree == 1 and s.rational_value() == y:
            return invariant_stalk_det(F, s, conv)
    return F.stalk_det(y)


# quadratic determinants

def _self_dual(L):
    """Character multiset of Gr^M closed under inversion."""
    counts = {}
    for chi, k in L.characters():
        counts[chi] = counts.get(chi, 0) + k
    return all(counts.get(chi.inverse(), 0) == k for chi, k in counts.items())


def check_hypotheses(F, ys, conv=PINNED):
    """Return a dict clause -> (ok, detail) for conditions (i)-(iii)."""
    base = F.base
    out = {}
    minus = MulChar.quadratic(base)
    chars = {(b.n, b.l, b.chi.e) for b in F.infinity.blocks}
    out["i"] = (chars == {(1, 1, minus.e)}, sorted(chars))
    bad = [s.to_json() for s, L in F.singular if not _self_dual(L)]
    out["ii"] = (not bad, bad)
    dets = {}
    ok = True
    for y in ys:
        D = middle_stalk_det(F, y, conv)
        if D is None:
            ok = False
            dets[y] = None
            continue
        sq = is_signed_q_power(D, base.q)
        dets[y] = sq
        ok = ok and sq is not None
    out["iii"] = (ok, dets)
    return out


def quadratic_det_check(F, ys, conv=PINNED):
    """Verify (i)-(iii) on F and on MC_{-1}(F); raise on the first failure."""
    from .mc import mc_sheaf
    base = F.base
    if base.q % 2 == 0:
        raise ValueError("quadratic determinant check needs odd q")
    report = {"input": check_hypotheses(F, ys, conv)}
    for clause, (ok, detail) in report["input"].items():
        if not ok:
            raise HypothesisFailed(f"input fails ({clause}): {detail}")
    G = mc_sheaf(F, MulChar.quadratic(base), conv)
    report["output"] = check_hypotheses(G, ys, conv)
    for clause, (ok, detail) in report["output"].items():
        if not ok:
            raise HypothesisFailed(f"output fails ({clause}): {detail}")
    report["output_sheaf"] = G
    return report
