"""Tame local monodromy data and symbolic sheaves on the affine line.

A block J_n (x) Ind_l(L_chi (x) F) at a closed point s of degree d is stored
as (n, l, chi, alpha): chi is a character of F_{q^(d l)}, alpha the Frobenius
scalar of the lowest graded piece of the monodromy filtration.  A block may
stand for `mult` copies that differ only in their scalars; alpha is then the
product of those scalars.  This is all the determinant formulas ever need,
and it lets data whose individual eigenvalues are unknown (for instance the
unramified stalk at a freshly twisted point) still be carried exactly.
alpha is None when even the product is unknown.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .cyclo import CycloNum, one
from .errors import NotIrreducible, PointCollision, ZeroScalar
from .field import MulChar, char_eval


@dataclass(frozen=True)
class Conventions:
    """Which graded piece of J_n is the inertia-invariant line, and the Tate
    twist carried by the quotient of a unipotent block by its invariants."""

    eigenspace_weight: str = "0"
    quotient_twist: int = 1

    def __post_init__(self):
        if self.eigenspace_weight not in ("0", "top"):
            raise ValueError("eigenspace_weight must be '0' or 'top'")
        if self.quotient_twist not in (0, 1):
            raise ValueError("quotient_twist must be 0 or 1")

    def to_json(self):
        return {"eigenspace_weight": self.eigenspace_weight, "quotient_twist": self.quotient_twist}


PINNED = Conventions("0", 1)
ALL_CONVENTIONS = [Conventions(w, t) for w in ("0", "top") for t in (0, 1)]


def _qpow(q, k):
    return CycloNum.from_rational(Fraction(q) ** k)


# points

@dataclass(frozen=True)
class PointOrbit:
    """A closed point of A^1 given by its monic minimal polynomial.

    coeffs are base-field codes, lowest degree first, ending with 1.
    """

    base: object
    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2 or c[-1] != 1:
            raise NotIrreducible("point polynomial must be monic of positive degree")

    @classmethod
    def rational(cls, base, a):
        return cls(base, (int(base.base.neg(a)), 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_rational(self):
        return self.degree == 1

    def rational_value(self):
        return int(self.base.base.neg(self.coeffs[0]))

    def evaluate(self, xs, k):
        """P(x) for codes xs of F_{q^k}."""
        F = self.base.level(k)
        xs = np.asarray(xs, dtype=np.int64)
        cf = self.base.embed(list(self.coeffs), k)
        out = np.zeros_like(xs)
        for c in reversed(cf):
            out = F.add(F.mul(out, xs), int(c))
        return out

    def derivative_at(self, xs, k):
        F = self.base.level(k)
        xs = np.asarray(xs, dtype=np.int64)
        p = self.base.p
        base = self.base.base
        # i*c in F_q by repeated addition, i taken mod p
        codes = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            v = 0
            for _ in range(i % p):
                v = int(base.add(v, c))
            codes.append(v)
        cf = self.base.embed(codes, k)
        out = np.zeros_like(xs)
        for c in reversed(cf):
            out = F.add(F.mul(out, xs), int(c))
        return out

    def roots(self, k=None):
        """Sorted codes of the roots in F_{q^k} (default k = degree)."""
        k = k or self.degree
        F = self.base.level(k)
        xs = F.elements()
        return np.flatnonzero(self.evaluate(xs, k) == 0)

    def root(self):
        return int(self.roots()[0])

    def validate(self):
        for j in range(1, self.degree // 2 + 1):
            if len(self.roots(j)):
                raise NotIrreducible(f"{self.coeffs} has a root over F_q^{j}")
        return self

    def contains(self, y):
        return int(self.evaluate([y], 1)[0]) == 0 if self.degree == 1 else False

    def to_json(self):
        return list(self.coeffs)

    def __repr__(self):
        return f"Point{self.coeffs}"


# blocks and local data

@dataclass(frozen=True)
class TameBlock:
    n: int
    l: int
    chi: MulChar
    alpha: Optional[CycloNum]
    mult: int = 1

    def __post_init__(self):
        if self.n < 1 or self.l < 1 or self.mult < 1:
            raise ValueError("block sizes must be positive")
        if self.chi.is_trivial() and self.l != 1:
            raise ValueError("trivial character blocks have l = 1")
        if self.alpha is not None and self.alpha.is_zero():
            raise ZeroScalar("block scalar must be nonzero")

    @property
    def trivial(self):
        return self.chi.is_trivial()

    def dim(self):
        return self.n * self.l * self.mult

    def with_alpha(self, alpha):
        return replace(self, alpha=alpha)

    def to_json(self):
        return {"n": self.n, "l": self.l, "chi_e": self.chi.e, "mult": self.mult,
                "alpha": None if self.alpha is None else self.alpha.to_json()}


@dataclass(frozen=True)
class LocalData:
    blocks: tuple
    degree: int = 1

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))

    def rank(self):
        return sum(b.dim() for b in self.blocks)

    def invariant_dim(self):
        return sum(b.mult for b in self.blocks if b.trivial)

    def q_s(self, base):
        return base.q ** self.degree

    def __add__(self, other):
        assert self.degree == other.degree
        return LocalData(self.blocks + other.blocks, self.degree)

    def characters(self):
        """Geometric inertia characters with multiplicity, as (char, count)."""
        out = []
        for b in self.blocks:
            out.append((b.chi, b.n * b.mult))
        return out


class GradedPiece(tuple):
    """(chi, scalar, mult) piece of Gr^M."""

    __slots__ = ()

    def __new__(cls, chi, scalar, mult=1):
        return tuple.__new__(cls, (chi, scalar, mult))

    chi = property(lambda self: self[0])
    scalar = property(lambda self: self[1])
    mult = property(lambda self: self[2])


def gr_M(b, degree, base):
    """Graded pieces of the monodromy filtration of a block."""
    qs = base.q ** degree
    out = []
    for j in range(b.n):
        s = None if b.alpha is None else b.alpha * _qpow(qs, b.l * j * b.mult)
        out.append(GradedPiece(b.chi, s, b.mult))
    return out


def eigenspace_scalar(b, degree, base, conv=PINNED):
    """Frobenius on the inertia-invariant line(s) of a trivial-character block."""
    assert b.trivial
    if b.alpha is None:
        return None
    if conv.eigenspace_weight == "0":
        return b.alpha
    return b.alpha * _qpow(base.q ** degree, (b.n - 1) * b.mult)


def quotient_by_invariants(L, base, conv=PINNED):
    qs = base.q ** L.degree
    out = []
    for b in L.blocks:
        if not b.trivial:
            out.append(b)
        elif b.n >= 2:
            a = None if b.alpha is None else b.alpha * _qpow(qs, conv.quotient_twist * b.mult)
            out.append(TameBlock(b.n - 1, 1, b.chi, a, b.mult))
    return LocalData(tuple(out), L.degree)


def refill_block(qb, degree, base, conv=PINNED):
    """Inverse of quotient_by_invariants on one trivial quotient block."""
    qs = base.q ** degree
    a = None if qb.alpha is None else qb.alpha * _qpow(qs, -conv.quotient_twist * qb.mult)
    return TameBlock(qb.n + 1, 1, qb.chi, a, qb.mult)


def twist_block(b, beta):
    if beta is not None and beta.is_zero():
        raise ZeroScalar("unramified twist by zero")
    if b.alpha is None or beta is None:
        return b.with_alpha(None)
    return b.with_alpha(b.alpha * beta ** (b.l * b.mult))


def twist_unramified(L, beta):
    return LocalData(tuple(twist_block(b, beta) for b in L.blocks), L.degree)


def kummer_scalar_at(chi, s, y0, sign=1):
    """chi(N(y0 - x_s)) = chi(P_s(y0)) for a base-field constant y0.

    With sign = -1 the value chi(N(x_s - y0)) is returned instead.
    """
    v = int(s.evaluate([y0], 1)[0])
    if v == 0:
        raise PointCollision(f"{y0} lies on {s}")
    val = char_eval(chi, v)
    if sign == -1 and s.degree % 2:
        val = val * chi.at_minus_one()
    return val


# sheaves

@dataclass(frozen=True)
class DetSheaf:
    """The determinant of a tame sheaf on U as a rank-1 object:
    det(y) = c^deg(y) * prod_s nu_s(N(P_s(y))).  c may be unknown (None)."""

    c: Optional[CycloNum]
    nus: tuple  # ((PointOrbit, base MulChar), ...)

    def at_rational(self, y):
        if self.c is None:
            return None
        val = self.c
        for s, nu in self.nus:
            v = int(s.evaluate([y], 1)[0])
            if v == 0:
                raise PointCollision(f"{y} lies on {s}")
            val = val * char_eval(nu, v)
        return val

    def at_point(self, t):
        """det(Frob_t) at a closed point t outside S."""
        if t.degree == 1:
            return self.at_rational(t.rational_value())
        if self.c is None:
            return None
        d = t.degree
        sig = t.root()
        val = self.c ** d
        for s, nu in self.nus:
            z = int(s.evaluate([sig], d)[0])
            if z == 0:
                raise PointCollision(f"{t} meets {s}")
            val = val * char_eval(nu.pullback(d), z)
        return val

    def local_det(self, s):
        """Determinant of the full local data at s, relative to x - x_s."""
        if self.c is None:
            return None
        d = s.degree
        sig = s.root()
        val = self.c ** d
        for t, nu in self.nus:
            if t == s:
                z = int(s.derivative_at([sig], d)[0])
            else:
                z = int(t.evaluate([sig], d)[0])
            val = val * char_eval(nu.pullback(d) if d > 1 else nu, z)
        return val

    def inertia_character(self, s):
        for t, nu in self.nus:
            if t == s:
                return nu
        return None


@dataclass(frozen=True)
class SheafData:
    base: object
    singular: tuple  # ((PointOrbit, LocalData), ...)
    infinity: LocalData
    rank: int
    stalk_det_hint: dict = field(default_factory=dict, compare=False)
    det_sheaf: Optional[DetSheaf] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "singular", tuple(self.singular))
        for s, L in self.singular:
            if L.degree != s.degree:
                raise ValueError(f"local data degree mismatch at {s}")
            if L.rank() != self.rank:
                raise ValueError(f"local rank {L.rank()} at {s} differs from rank {self.rank}")
        if self.infinity.rank() != self.rank:
            raise ValueError("infinity data has the wrong rank")

    @property
    def points(self):
        return [s for s, _ in self.singular]

    def local(self, s):
        for t, L in self.singular:
            if t == s:
                return L
        raise KeyError(s)

    def total_degree(self):
        return sum(s.degree for s in self.points)

    def in_S(self, y):
        return any(s.degree == 1 and s.rational_value() == y for s in self.points)

    def infinity_character(self):
        """chi_inf if the data at infinity is scalar Kummer (n = l = 1), else None."""
        chars = {(b.n, b.l, b.chi.e) for b in self.infinity.blocks}
        if len(chars) != 1:
            return None
        n, l, e = chars.pop()
        if n != 1 or l != 1:
            return None
        return MulChar(self.base, 1, e)

    def is_standard(self, chi):
        return self.infinity_character() == chi

    def infinity_det(self):
        val = one()
        for b in self.infinity.blocks:
            if b.alpha is None:
                return None
            val = val * b.alpha
        return val

    def stalk_det(self, y):
        if y in self.stalk_det_hint:
            return self.stalk_det_hint[y]
        if self.det_sheaf is not None:
            return self.det_sheaf.at_rational(y)
        return None


def tate_twist(X, m, base=None):
    """Twist by Q_l(m): Frobenius scalars times q^(-m) per unit of rank."""
    if isinstance(X, CycloNum):
        return X * _qpow(base.q, -m)
    if isinstance(X, LocalData):
        qs = base.q ** X.degree
        return LocalData(tuple(b if b.alpha is None else
                               b.with_alpha(b.alpha * _qpow(qs, -m * b.l * b.mult))
                               for b in X.blocks), X.degree)
    if isinstance(X, SheafData):
        B = X.base
        r = X.rank
        sing = tuple((s, tate_twist(L, m, B)) for s, L in X.singular)
        hints = {y: v * _qpow(B.q, -m * r) for y, v in X.stalk_det_hint.items()}
        ds = X.det_sheaf
        if ds is not None and ds.c is not None:
            ds = DetSheaf(ds.c * _qpow(B.q, -m * r), ds.nus)
        return SheafData(B, sing, tate_twist(X.infinity, m, B), r, hints, ds)
    raise TypeError(type(X))


def twist_sheaf_unramified(X, beta):
    """F (x) (unramified rank one module with Frobenius beta)."""
    B = X.base
    r = X.rank
    sing = tuple((s, twist_unramified(L, beta ** s.degree)) for s, L in X.singular)
    hints = {y: v * beta ** r for y, v in X.stalk_det_hint.items()}
    ds = X.det_sheaf
    if ds is not None and ds.c is not None:
        ds = DetSheaf(ds.c * beta ** r, ds.nus)
    return SheafData(B, sing, twist_unramified(X.infinity, beta), r, hints, ds)


def merge_factors(base, factors):
    """Combine Kummer factors at equal points; drop those that cancel."""
    acc = {}
    order = []
    for s, eta in factors:
        if eta.l != 1:
            raise ValueError("Kummer factors use base-field characters")
        if s not in acc:
            acc[s] = MulChar.trivial(base)
            order.append(s)
        acc[s] = acc[s] * eta
    return [(s, acc[s]) for s in order if not acc[s].is_trivial()]


def kummer_value_at_root(factors, s):
    """prod_j eta_j(N(P_j(x_s))) (j != s) times eta_s(N(P_s'(x_s)))."""
    d = s.degree
    sig = s.root()
    val = one()
    for t, eta in factors:
        if t == s:
            z = int(s.derivative_at([sig], d)[0])
        else:
            z = int(t.evaluate([sig], d)[0])
            if z == 0:
                raise PointCollision(f"{s} and {t} share a root")
        val = val * char_eval(eta.pullback(d) if d > 1 else eta, z)
    return val


def kummer_sheaf(base, factors):
    """SheafData of prod_i L_{eta_i}(P_i(x)) for monic irreducible P_i."""
    factors = merge_factors(base, factors)
    if not factors:
        raise ValueError("the constant sheaf has no singular points")
    sing = []
    inf_char = MulChar.trivial(base)
    for s, eta in factors:
        s.validate()
        chi_s = eta.pullback(s.degree) if s.degree > 1 else eta
        alpha = kummer_value_at_root(factors, s)
        sing.append((s, LocalData((TameBlock(1, 1, chi_s, alpha),), s.degree)))
        inf_char = inf_char * eta ** s.degree
    infinity = LocalData((TameBlock(1, 1, inf_char.inverse(), one()),), 1)
    det = DetSheaf(one(), tuple(factors))
    hints = {}
    for y in range(base.q):
        if any(int(s.evaluate([y], 1)[0]) == 0 for s, _ in factors):
            continue
        hints[y] = det.at_rational(y)
    return SheafData(base, tuple(sing), infinity, 1, hints, det)
