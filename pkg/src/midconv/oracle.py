"""Brute-force ground truth for the symbolic engine.

An ExplicitSheaf is a product of Kummer sheaves L_eta(P(x)) followed by a
history of middle tensors (MT) and middle convolutions (MC).  Its trace
function over F_{q^k} is held as an exact integer table: row j of a table
is the coefficient of zeta_{q-1}^j, one column per field element, and the
column at a singular point holds the trace on the stalk of j_*.

Trace of MC_chi(E) at y over F_{q^k}:

    -sum_{x != y} tr(j_*E)_x chi(N(y - x))  -  chi(-1)^k tr(Frob^k, W_E)

where E restricted to a neighbourhood of infinity is nu(x) (x) W_E with W_E
unramified.  For a Kummer product W_E is trivial; for E = MC_chi(E') it is
H^1_c(A^1, j_*E'), whose traces are minus the sums of all stalk traces.
The correction applies only when nu * chi is trivial (standard situation);
otherwise there is no invariant at infinity to remove.

Whole tables of MC outputs (needed for nested histories) use FFT
convolution over the additive group (Z/p)^n.  Inputs are integers, so the
result is recovered by rounding; the rounding residual is asserted small.
"""

from fractions import Fraction

import numpy as np

from .cyclo import CycloNum, cyclotomic_poly, euler_phi
from .errors import (DimensionOverflow, InconsistentTraces, NotStandardSituation,
                     SizeLimitExceeded, UnknownStalk)
from .field import MulChar, base_char_exponents
from .localdata import PointOrbit, merge_factors
from .parallel import summed

MAX_DIMENSION = 12


class ExplicitSheaf:

    def __init__(self, base, factors=(), history=(), _parent=None):
        self.base = base
        self.factors = tuple(merge_factors(base, factors))
        self.history = tuple(history)
        self._parent = _parent
        self._tables = {}
        self._w = {}

    # construction

    def _child(self, op):
        return ExplicitSheaf(self.base, self.factors, self.history + (op,), _parent=self)

    def mt(self, eta, a):
        if eta.is_trivial():
            return self
        if not self.history:
            # still a Kummer product: stalks at a stay exact
            return ExplicitSheaf(self.base, self.factors + ((a, eta),))
        return self._child(("MT", eta, a))

    def mc(self, chi):
        return self._child(("MC", chi))

    @property
    def parent(self):
        if not self.history:
            return None
        if self._parent is None:
            self._parent = ExplicitSheaf(self.base, self.factors, self.history[:-1])
        return self._parent

    @property
    def N0(self):
        return max(self.base.q - 1, 1)

    def singular_points(self):
        pts = [s for s, _ in self.factors]
        for op in self.history:
            if op[0] == "MT" and op[2] not in pts:
                pts.append(op[2])
        return pts

    def nu_infinity(self):
        """Character nu with E ~ nu(x) (x) W near infinity (None if not scalar)."""
        if not self.history:
            nu = MulChar.trivial(self.base)
            for s, eta in self.factors:
                nu = nu * eta ** s.degree
            return nu
        op = self.history[-1]
        prev = self.parent.nu_infinity()
        if op[0] == "MT":
            return None if prev is None else prev * op[1] ** op[2].degree
        if prev is None or not (prev * op[1]).is_trivial():
            return None
        return op[1]

    def standard_for(self, chi):
        nu = self.nu_infinity()
        return nu is not None and (nu * chi).is_trivial()

    # tables

    def _char_exps(self, chi, F, z):
        if self.base.q == 2:
            return np.where(np.asarray(z) == 0, -1, 0)
        return base_char_exponents(chi, F, z)

    def _root_mask(self, F, k, points):
        xs = F.elements()
        mask = np.zeros(F.size, dtype=bool)
        for s in points:
            mask |= s.evaluate(xs, k) == 0
        return mask

    def table(self, k):
        """(values, unknown): exact traces of j_*E over F_{q^k}."""
        if k in self._tables:
            return self._tables[k]
        F = self.base.level(k)
        N0 = self.N0
        xs = F.elements()
        if not self.history:
            expo = np.zeros(F.size, dtype=np.int64)
            zero = np.zeros(F.size, dtype=bool)
            for s, eta in self.factors:
                v = s.evaluate(xs, k)
                zero |= v == 0
                expo += np.maximum(self._char_exps(eta, F, v), 0)
            A = np.zeros((N0, F.size), dtype=np.int64)
            cols = np.flatnonzero(~zero)
            A[expo[cols] % N0, cols] = 1
            out = (A, np.zeros(F.size, dtype=bool))
        else:
            op = self.history[-1]
            A, unknown = self.parent.table(k)
            if op[0] == "MT":
                out = self._mt_table(A, unknown, op[1], op[2], F, k)
            else:
                out = self._mc_table(A, unknown, op[1], F, k)
        self._tables[k] = out
        return out

    def _mt_table(self, A, unknown, eta, a, F, k):
        v = a.evaluate(F.elements(), k)
        roots = v == 0
        sh = self._char_exps(eta, F, v)
        B = shift_rows(A, np.maximum(sh, 0))
        B[:, roots] = 0
        unknown = unknown.copy()
        if a in self.parent.singular_points():
            # stalk of j_*(E (x) L_eta) at a is not determined by the table
            unknown |= roots
        return B, unknown

    def _mc_table(self, A, unknown, chi, F, k):
        if unknown.any():
            raise UnknownStalk("MC over a table with unknown stalks")
        b = self._char_exps(chi, F, F.elements())
        C = -group_convolve(A, b, self.base.p, F.n, self.N0)
        corr = self._infinity_correction(chi, k)
        if corr is not None:
            C -= corr[:, None]
        return canonical(C, self.N0), np.zeros(F.size, dtype=bool)

    def _infinity_correction(self, chi, k):
        parent = self.parent
        if parent.nu_infinity() is None:
            raise UnknownStalk("infinity module of the input is not scalar")
        if not parent.standard_for(chi):
            return None
        w = parent.w_power_sum(k)
        sign = 1
        if self.base.p != 2 and chi.at_minus_one() != 1 and k % 2:
            sign = -1
        return sign * w

    def w_power_sum(self, k):
        """Traces of Frob^k on W (the unramified part at infinity), as a row vector."""
        if k in self._w:
            return self._w[k]
        N0 = self.N0
        if not self.history:
            w = np.zeros(N0, dtype=np.int64)
            w[0] = 1
        else:
            op = self.history[-1]
            if op[0] == "MT":
                w = self.parent.w_power_sum(k)
            else:
                if not self.parent.standard_for(op[1]):
                    raise NotStandardSituation("infinity module after a non-standard MC")
                A, unknown = self.parent.table(k)
                if unknown.any():
                    raise UnknownStalk("unknown stalk in the infinity module")
                w = canonical(-A.sum(axis=1)[:, None], N0)[:, 0]
        self._w[k] = w
        return w

    # pointwise sums

    def trace_vector(self, x, k):
        A, unknown = self.table(k)
        if unknown[x]:
            raise UnknownStalk(f"stalk at {x} over level {k} is unknown")
        return A[:, x]

    def h1c_power_sum(self, chi, y, k, workers=1):
        """trace(Frob^k, H^1_c(U_y, E (x) L_chi(y - x))) for rational y."""
        F = self.base.level(k)
        yk = int(self.base.embed(y, k))
        A, _ = self.table(k)
        excl = self._root_mask(F, k, self.singular_points())
        excl[yk] = True
        return -self._twisted_sum(A, excl, chi, F, yk, workers)

    def mc_stalk_power_sum(self, chi, y, k, workers=1):
        """trace(Frob^k) on the stalk of j_* MC_chi(E) at rational y."""
        F = self.base.level(k)
        yk = int(self.base.embed(y, k))
        A, unknown = self.table(k)
        excl = np.zeros(F.size, dtype=bool)
        excl[yk] = True
        if (unknown & ~excl).any():
            raise UnknownStalk("MC stalk needs an unknown stalk")
        val = -self._twisted_sum(A, excl, chi, F, yk, workers)
        if self.nu_infinity() is None:
            raise UnknownStalk("infinity module is not scalar")
        if self.standard_for(chi):
            sign = -1 if (chi.at_minus_one() != 1 and k % 2) else 1
            val = val - sign * self.w_power_sum(k)
        return val

    def _twisted_sum(self, A, excl, chi, F, yk, workers=1):
        N0 = self.N0

        def task(start, stop):
            xs = np.arange(start, stop, dtype=np.int64)
            keep = ~excl[start:stop]
            xs = xs[keep]
            z = F.sub(yk, xs)
            b = self._char_exps(chi, F, z)
            ok = b >= 0
            xs, b = xs[ok], b[ok]
            idx = (np.arange(N0)[:, None] + b[None, :]) % N0
            out = np.zeros(N0, dtype=np.int64)
            np.add.at(out, idx.ravel(), A[:, xs].ravel())
            return out

        return canonical(summed(task, F.size, workers)[:, None], N0)[:, 0]

    def to_cyclo(self, vec):
        return CycloNum.from_exponent_counts(self.N0, [int(v) for v in vec])

    def to_json(self):
        hist = []
        for op in self.history:
            if op[0] == "MC":
                hist.append({"op": "MC", "chi_e": op[1].e})
            else:
                hist.append({"op": "MT", "chi_e": op[1].e, "point": op[2].to_json()})
        return {"base": {"p": self.base.p, "m": self.base.m},
                "factors": [{"point": s.to_json(), "chi_e": eta.e} for s, eta in self.factors],
                "history": hist}


def shift_rows(A, sh):
    """Multiply column x by zeta^sh[x]."""
    N0 = A.shape[0]
    out = np.zeros_like(A)
    rows = (np.arange(N0)[:, None] + sh[None, :]) % N0
    cols = np.broadcast_to(np.arange(A.shape[1])[None, :], rows.shape)
    out[rows, cols] = A
    return out


def canonical(A, N0):
    """Reduce the row index (exponent) modulo Phi_N0, keeping N0 rows."""
    phi = cyclotomic_poly(N0)
    deg = len(phi) - 1
    A = A.copy()
    for j in range(N0 - 1, deg - 1, -1):
        v = A[j].copy()
        if not v.any():
            continue
        A[j] = 0
        for i in range(deg):
            if phi[i]:
                A[j - deg + i] -= v * phi[i]
    return A


def group_convolve(A, b, p, n, N0):
    """C[m, y] = sum over x, j, i with j + i = m of A[j, x] [b(y - x) = i]."""
    shape = (p,) * n
    size = p ** n
    FA = {}
    for j in range(N0):
        if A[j].any():
            FA[j] = np.fft.rfftn(A[j].reshape(shape).astype(np.float64))
    FB = {}
    for i in range(N0):
        ind = (b == i)
        if ind.any():
            FB[i] = np.fft.rfftn(ind.reshape(shape).astype(np.float64))
    C = np.zeros((N0, size), dtype=np.int64)
    for m in range(N0):
        acc = None
        for j, fa in FA.items():
            fb = FB.get((m - j) % N0)
            if fb is None:
                continue
            acc = fa * fb if acc is None else acc + fa * fb
        if acc is None:
            continue
        real = np.fft.irfftn(acc, s=shape, axes=tuple(range(n))).reshape(size)
        rounded = np.rint(real)
        err = np.abs(real - rounded).max() if size else 0.0
        if err > 0.25:
            raise ArithmeticError(f"FFT rounding residual {err} too large for exact recovery")
        C[m] = rounded.astype(np.int64)
    return C


# characteristic polynomials

def newton_elementary(ps):
    """Elementary symmetric e_0..e_d from power sums p_1..p_d (CycloNums)."""
    es = [CycloNum.from_rational(1)]
    for k in range(1, len(ps) + 1):
        acc = CycloNum.from_rational(0)
        for i in range(1, k + 1):
            term = es[k - i] * ps[i - 1]
            acc = acc + term if i % 2 else acc - term
        es.append(acc * Fraction(1, k))
    return es


def predicted_power_sum(es, ps, k):
    """p_k implied by eigenvalues with elementary symmetric functions es (k > d)."""
    d = len(es) - 1
    acc = CycloNum.from_rational(0)
    for i in range(1, d + 1):
        term = es[i] * ps[k - i - 1]
        acc = acc + term if i % 2 else acc - term
    return acc


class Charpoly:
    """det(1 - t Frob) = sum_k (-1)^k e_k t^k."""

    def __init__(self, es):
        self.es = es

    @property
    def degree(self):
        return len(self.es) - 1

    @property
    def det(self):
        return self.es[-1]

    def coefficients(self):
        return [e if k % 2 == 0 else -e for k, e in enumerate(self.es)]

    def twisted(self, c):
        """Charpoly after multiplying every eigenvalue by c."""
        return Charpoly([e * c ** k for k, e in enumerate(self.es)])

    def __eq__(self, other):
        return self.degree == other.degree and all(a == b for a, b in zip(self.es, other.es))

    __hash__ = None


def _power_sums(fn, kmax):
    return [fn(k) for k in range(1, kmax + 1)]


def charpoly_from_traces(fn, d):
    if d > MAX_DIMENSION:
        raise DimensionOverflow(f"dimension {d} exceeds {MAX_DIMENSION}")
    return Charpoly(newton_elementary(_power_sums(fn, d)))


def recover_dimension_from(fn, dmax=MAX_DIMENSION):
    """Smallest D whose Newton reconstruction explains p_{D+1}..p_{max(2D, D+2)}.

    At least two extra power sums are checked: a single vanishing trace
    (supersingular fibres) would otherwise pass for dimension 0.  Levels
    beyond the field size limit are skipped.
    """
    ps = []

    def p(k):
        while len(ps) < k:
            ps.append(fn(len(ps) + 1))
        return ps[k - 1]

    for D in range(0, dmax + 1):
        es = newton_elementary([p(k) for k in range(1, D + 1)])
        ok = True
        for k in range(D + 1, max(2 * D, D + 2) + 1):
            try:
                pk = p(k)
            except SizeLimitExceeded:
                if k == D + 1:
                    raise
                break
            if predicted_power_sum(es, [p(j) for j in range(1, k)], k) != pk:
                ok = False
                break
        if ok:
            return D
    raise InconsistentTraces(f"no dimension <= {dmax} explains the traces")


def _h1c_fn(E, chi, y, workers=1):
    return lambda k: E.to_cyclo(E.h1c_power_sum(chi, y, k, workers))


def _mc_fn(E, chi, y, workers=1):
    return lambda k: E.to_cyclo(E.mc_stalk_power_sum(chi, y, k, workers))


def _stalk_fn(E, y):
    return lambda k: E.to_cyclo(E.trace_vector(int(E.base.embed(y, k)), k))


def charpoly_frobenius(E, chi, y, d=None, workers=1):
    """Frobenius on H^1_c(U_y, E (x) L_chi(y - x)), y rational outside S."""
    fn = _h1c_fn(E, chi, y, workers)
    if d is None:
        d = recover_dimension_from(fn)
    return charpoly_from_traces(fn, d)


def mc_charpoly(E, chi, y, d=None, workers=1):
    """Frobenius on the stalk at rational y of j_* MC_chi(E)."""
    fn = _mc_fn(E, chi, y, workers)
    if d is None:
        d = recover_dimension_from(fn)
    return charpoly_from_traces(fn, d)


def stalk_charpoly(E, y, d=None):
    """Frobenius on the stalk of j_*E at a rational point y."""
    fn = _stalk_fn(E, y)
    if d is None:
        d = recover_dimension_from(fn)
    return charpoly_from_traces(fn, d)


def recover_dimension(E, chi, y, kind="h1c", dmax=MAX_DIMENSION):
    fn = {"h1c": lambda: _h1c_fn(E, chi, y), "mc": lambda: _mc_fn(E, chi, y),
          "stalk": lambda: _stalk_fn(E, y)}[kind]()
    return recover_dimension_from(fn, dmax)


def trace_point(E, x, k=1):
    """Exact trace of j_*E at the point with code x of F_{q^k}."""
    return E.to_cyclo(E.trace_vector(int(x), k))


def kummer_explicit(base, factors):
    return ExplicitSheaf(base, factors)


def rational_point(base, a):
    return PointOrbit.rational(base, a)


def n0_phi(E):
    return euler_phi(E.N0)
