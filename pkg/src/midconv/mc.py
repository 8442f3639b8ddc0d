"""Middle convolution MC_chi on symbolic sheaf data.

Local rewrite at a finite point s, for a block of the quotient by inertia
invariants with character chi_i (chi pulled back to the block's field):

    chi_i not in {1, chi^-1}:  (n, l, chi chi_i, alpha * (-J(chi, chi_i)))
    chi_i = 1:                 (n, 1, chi, alpha)
    chi_i = chi^-1:            (n, 1, 1, alpha * chi(-1) * q_s)

In the last case the output line carries the Tate twist (-1) of the
Fourier-side identification; without it weights and the oracle disagree.
Output trivial blocks are quotient blocks again and are refilled to full
Jordan blocks; remaining invariants become J_1 blocks whose scalar product
is recovered from the determinant of the output (see `_fit_det_sheaf`).
"""

from fractions import Fraction

from .charsum import jacobi_sum
from .cyclo import CycloNum, one
from .epsilon import EpsilonContext, det_mc
from .errors import (ExcludedKummerTranslate, MidconvError, NotStandardSituation,
                     TrivialConvolutionChar)
from .field import MulChar
from .localdata import (PINNED, DetSheaf, LocalData, SheafData, TameBlock,
                        quotient_by_invariants, refill_block)


def _q(q, k):
    return CycloNum.from_rational(Fraction(q) ** k)


def block_character_level(b, degree):
    return degree * b.l


def pulled(chi, L):
    return chi if L == 1 else chi.pullback(L)


def mc_block(b, degree, chi, base):
    """Rewrite one quotient block at a point of the given degree."""
    if chi.is_trivial():
        raise TrivialConvolutionChar("MC needs a nontrivial character")
    L = degree * b.l
    chiL = pulled(chi, L)
    qs = base.q ** degree
    if b.trivial:
        return TameBlock(b.n, 1, pulled(chi, degree), b.alpha, b.mult)
    if b.chi == chiL.inverse():
        if b.l != 1:
            raise ValueError("an induced block cannot carry a character from the residue field")
        a = None if b.alpha is None else b.alpha * (chiL.at_minus_one() * qs) ** b.mult
        return TameBlock(b.n, 1, MulChar.trivial(base, degree), a, b.mult)
    J = jacobi_sum(chiL, b.chi)
    a = None if b.alpha is None else b.alpha * (-J) ** b.mult
    return TameBlock(b.n, b.l, chiL * b.chi, a, b.mult)


def infinity_invariants(F, chi):
    """Dimension of the inertia invariants of F (x) L_chi(y - x) at infinity.

    Infinity characters are read in u = 1/x; each Jordan block J_n (x) L_chi
    contributes one invariant line.
    """
    return sum(b.mult for b in F.infinity.blocks if b.l == 1 and b.chi == chi)


def mc_infinity(F, chi, rank, c=None):
    """Local data at infinity of MC_chi(F) (tame rule, characters in u = 1/x).

    trivial J_n -> J_(n+1) (x) chi^-1;  J_n (x) chi -> trivial J_(n-1);
    J_n (x) c -> J_n (x) c chi^-1 otherwise; J_1 (x) chi^-1 fills the rest.
    In standard situation only the fill survives and carries the scalar c.
    """
    base = F.base
    inv = chi.inverse()
    blocks = []
    for b in F.infinity.blocks:
        if b.trivial:
            blocks.append(TameBlock(b.n + 1, 1, inv, None, b.mult))
        elif b.l == 1 and b.chi == chi:
            if b.n > 1:
                blocks.append(TameBlock(b.n - 1, 1, MulChar.trivial(base), None, b.mult))
        else:
            blocks.append(TameBlock(b.n, b.l, b.chi * pulled(inv, b.l), None, b.mult))
    fill = rank - sum(b.dim() for b in blocks)
    if fill < 0:
        raise MidconvError("infinity data larger than the convolution rank")
    if fill:
        blocks.append(TameBlock(1, 1, inv, c, fill))
    return LocalData(tuple(blocks), 1)


def mc_rank(F, chi, require_standard=True):
    if require_standard and not F.is_standard(chi):
        raise NotStandardSituation("MC rank needs scalar L_chi monodromy at infinity")
    d = F.rank * F.total_degree()
    fin = sum(s.degree * L.invariant_dim() for s, L in F.singular)
    return d - fin - infinity_invariants(F, chi)


def mc_local(F, chi, s, conv=PINNED, rank=None):
    """Full local data of MC_chi(F) at s (quotient rewrite plus invariants)."""
    base = F.base
    L = F.local(s)
    Q = quotient_by_invariants(L, base, conv)
    blocks, refilled = [], 0
    for b in Q.blocks:
        nb = mc_block(b, s.degree, chi, base)
        if nb.trivial:
            nb = refill_block(nb, s.degree, base, conv)
            refilled += nb.mult
        blocks.append(nb)
    if rank is None:
        rank = mc_rank(F, chi)
    quotient_rank = Q.rank()
    extra = rank - quotient_rank - refilled
    if extra < 0:
        raise MidconvError(f"inconsistent invariant count at {s}")
    if extra:
        blocks.append(TameBlock(1, 1, MulChar.trivial(base, s.degree), None, extra))
    return LocalData(tuple(blocks), s.degree)


def block_det(b, degree, base):
    """det(Frob_s) of a whole block (all copies), or None."""
    if b.alpha is None:
        return None
    qs = base.q ** degree
    val = b.alpha ** b.n * _q(qs, b.l * b.n * (b.n - 1) // 2 * b.mult)
    if (b.l - 1) * b.n * b.mult % 2:
        val = -val
    return val


def determinant_character(L, base):
    """Base-field character nu with nu o N = det of the inertia action, or None."""
    total = None
    for b in L.blocks:
        if b.l != 1:
            return None
        c = b.chi ** (b.n * b.mult)
        total = c if total is None else total * c
    if total is None:
        return MulChar.trivial(base)
    return total.descends()


def local_det_consistent(G, s):
    """Compare the product of block determinants at s with the determinant sheaf."""
    if G.det_sheaf is None:
        return None
    D = G.det_sheaf.local_det(s)
    if D is None:
        return None
    val = one()
    for b in G.local(s).blocks:
        bd = block_det(b, s.degree, G.base)
        if bd is None:
            return None
        val = val * bd
    return val == D


def _fit_det_sheaf(F, chi, G_local, rank, conv, y0=None):
    base = F.base
    nus = []
    for s, L in G_local:
        nu = determinant_character(L, base)
        if nu is None:
            return None
        if not nu.is_trivial():
            nus.append((s, nu))
    nus = tuple(nus)
    ys = [y0] if y0 is not None else [y for y in range(base.q) if not F.in_S(y)]
    c = None
    for y in ys:
        if F.stalk_det(y) is None:
            continue
        try:
            D = det_mc(F, chi, y, EpsilonContext(base, conv))
        except MidconvError:
            continue
        c = D / DetSheaf(one(), nus).at_rational(y)
        break
    return DetSheaf(c, nus)


def _solve_unknown(s, L, ds, base):
    """Fill the single unknown block scalar at s from the local determinant."""
    unknown = [i for i, b in enumerate(L.blocks) if b.alpha is None]
    if len(unknown) != 1 or ds is None or ds.c is None:
        return L
    i = unknown[0]
    b = L.blocks[i]
    if b.n != 1 or b.l != 1:
        return L
    known = one()
    for j, other in enumerate(L.blocks):
        if j != i:
            known = known * block_det(other, s.degree, base)
    blocks = list(L.blocks)
    blocks[i] = b.with_alpha(ds.local_det(s) / known)
    return LocalData(tuple(blocks), L.degree)


def is_kummer_translate(F, chi):
    if F.rank != 1 or len(F.singular) != 1:
        return False
    s, L = F.singular[0]
    return s.degree == 1 and len(L.blocks) == 1 and L.blocks[0].chi == chi.inverse()


def mc_sheaf(F, chi, conv=PINNED, y0=None, require_standard=True):
    """MC_chi(F) as symbolic data.

    With require_standard=False, data outside standard situation is accepted:
    local data is still exact, but the determinant of the output is unknown.
    """
    if chi.is_trivial():
        raise TrivialConvolutionChar("MC needs a nontrivial character")
    standard = F.is_standard(chi)
    if require_standard and not standard:
        raise NotStandardSituation(f"not in standard situation for chi = {chi.e}")
    if is_kummer_translate(F, chi):
        raise ExcludedKummerTranslate("F is a translate of L_chi^-1")
    base = F.base
    r = mc_rank(F, chi, require_standard=False)
    if r <= 0:
        raise MidconvError("middle convolution is zero")
    loc = [(s, mc_local(F, chi, s, conv, r)) for s in F.points]
    ds = _fit_det_sheaf(F, chi, loc, r, conv, y0) if standard else None
    if not standard:
        nus = []
        for s, L in loc:
            nu = determinant_character(L, base)
            if nu is None:
                nus = None
                break
            if not nu.is_trivial():
                nus.append((s, nu))
        ds = None if nus is None else DetSheaf(None, tuple(nus))
    loc = [(s, _solve_unknown(s, L, ds, base)) for s, L in loc]
    c = None if ds is None else ds.c
    infinity = mc_infinity(F, chi, r, c)
    hints = {}
    if ds is not None and ds.c is not None:
        for y in range(base.q):
            if not F.in_S(y):
                hints[y] = ds.at_rational(y)
    return SheafData(base, tuple(loc), infinity, r, hints, ds)


def infinity_consistent(G):
    """The inertia characters at infinity and at S multiply to the trivial one."""
    if G.det_sheaf is None:
        return None
    total = MulChar.trivial(G.base)
    for s, nu in G.det_sheaf.nus:
        total = total * nu ** s.degree
    inf = MulChar.trivial(G.base)
    for b in G.infinity.blocks:
        inf = inf * b.chi ** (b.n * b.mult)
    # in u = 1/x the character at infinity is inverse to the product at S
    return (total * inf).is_trivial()


# rigidity

def _geometric_keys(b, degree, base):
    """Inertia characters of one copy of the block, as comparable keys."""
    nu = b.chi.descends() if b.l == 1 else None
    if nu is not None:
        return [("base", nu.e)]
    L = degree * b.l
    qs = base.q ** degree
    M = b.chi.modulus
    return [(L, (b.chi.e * qs ** i) % M) for i in range(b.l)]


def centralizer_dim(L, base):
    sizes = {}
    for b in L.blocks:
        for key in _geometric_keys(b, L.degree, base):
            sizes.setdefault(key, []).extend([b.n] * b.mult)
    total = 0
    for ns in sizes.values():
        for a in ns:
            for c in ns:
                total += min(a, c)
    return total


def rigidity_index(F):
    m = 1 + F.total_degree()
    r = F.rank
    idx = (2 - m) * r * r
    for s, L in F.singular:
        idx += s.degree * centralizer_dim(L, F.base)
    idx += centralizer_dim(F.infinity, F.base)
    return idx
