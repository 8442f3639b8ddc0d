"""Finite fields F_{q^l}, q = p^m, with full discrete-log tables.

Elements of F_{p^n} are encoded as integers 0 <= c < p^n whose base-p digits
are the coefficients (lowest degree first) of a polynomial modulo a fixed
irreducible f of degree n.  All table-driven operations accept numpy arrays
of codes.

The base field F_q = F_p[t]/(f_m) is embedded into each level F_{q^k} by
sending t to the least root of f_m there.  The generator g_k of F_{q^k}^x is
chosen so that N(g_k) is the image of the base generator; hence a base
character chi evaluated on norms from F_{q^k} has exponent e relative to g_k,
which is what makes the oracle and the symbolic side agree on every level.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .cyclo import CycloNum, root_of_unity
from .errors import DegreeMismatch, NotPrime, SizeLimitExceeded

DEFAULT_SIZE_LIMIT = 2 ** 20
_size_limit = [DEFAULT_SIZE_LIMIT]


def set_size_limit(n):
    """Set the largest field cardinality any level may have."""
    _size_limit[0] = int(n)


def size_limit():
    return _size_limit[0]


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# polynomials over F_p, coefficient lists lowest degree first

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = [x % p for x in a]
    inv = pow(f[-1], p - 2, p)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _trim(a[:df])


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, f, p)


def _ppowmod(a, k, f, p):
    result = [1]
    while k:
        if k & 1:
            result = _pmulmod(result, a, f, p)
        a = _pmulmod(a, a, f, p)
        k >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible_fp(f, p):
    """f monic over F_p: no root in F_{p^j} for j <= deg/2."""
    n = len(f) - 1
    if n == 1:
        return True
    xp = [0, 1]
    for j in range(1, n // 2 + 1):
        xp = _ppowmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p, n):
    """The monic irreducible of degree n whose lower coefficients, read as a
    base-p integer (constant term least significant), are smallest."""
    for c in range(p ** n):
        f = [(c // p ** i) % p for i in range(n)] + [1]
        if n > 1 and f[0] == 0:
            continue
        if is_irreducible_fp(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The field F_{p^n} = F_p[x]/(f) with exp/log/trace tables."""

    def __init__(self, p, n, modulus=None, generator=None):
        self.p, self.n = p, n
        self.size = p ** n
        if self.size > size_limit():
            raise SizeLimitExceeded(f"field of size {self.size} exceeds limit {size_limit()}")
        self.modulus = tuple(modulus or least_irreducible(p, n))
        self.order = self.size - 1
        self._pw = p ** np.arange(n, dtype=np.int64)
        g = generator if generator is not None else self._least_primitive()
        self.generator = g
        self._build_tables(g)
        trx = [self._trace_poly(self.decode(p ** j)) for j in range(n)]
        self.trace_table = (self.digits(np.arange(self.size)) @ np.array(trx, dtype=np.int64)) % p

    # encoding

    def decode(self, c):
        return _trim([(c // self.p ** i) % self.p for i in range(self.n)])

    def encode(self, poly):
        poly = _pmod(list(poly), list(self.modulus), self.p) if len(poly) > self.n else poly
        return int(sum((int(a) % self.p) * self.p ** i for i, a in enumerate(poly)))

    def digits(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._pw) % self.p

    def undigits(self, dig):
        return (dig % self.p) @ self._pw

    # single-element polynomial arithmetic, used before tables exist

    def _mul_poly(self, a, b):
        return _pmulmod(a, b, list(self.modulus), self.p)

    def _pow_poly(self, a, k):
        return _ppowmod(a, k, list(self.modulus), self.p)

    def _trace_poly(self, a):
        acc, cur = [], a
        for _ in range(self.n):
            width = max(len(acc), len(cur))
            acc = [(x + y) % self.p for x, y in
                   zip(acc + [0] * (width - len(acc)), cur + [0] * (width - len(cur)))]
            cur = self._pow_poly(cur, self.p)
        acc = _trim(acc)
        assert len(acc) <= 1, "trace left the prime field"
        return acc[0] if acc else 0

    def _has_full_order(self, c):
        a = self.decode(c)
        for r in prime_factors(self.order):
            if self._pow_poly(a, self.order // r) == [1]:
                return False
        return True

    def _least_primitive(self):
        if self.order == 1:
            return 1
        for c in range(2, self.size):
            if self._has_full_order(c):
                return c
        raise AssertionError("no generator")

    def _mul_matrix(self, h):
        hp = self.decode(h)
        rows = []
        for j in range(self.n):
            xj = [0] * j + [1]
            rows.append(self.digits(self.encode(self._mul_poly(hp, xj))))
        return np.array(rows, dtype=np.int64)

    def _build_tables(self, g):
        block = min(self.order, 1024)
        first = [1]
        gp = self.decode(g)
        cur = [1]
        for _ in range(block - 1):
            cur = self._mul_poly(cur, gp)
            first.append(self.encode(cur))
        exp = np.empty(self.order, dtype=np.int64)
        chunk = np.array(first, dtype=np.int64)
        step = self._mul_matrix(self.encode(self._pow_poly(gp, block)))
        pos = 0
        while pos < self.order:
            take = min(block, self.order - pos)
            exp[pos:pos + take] = chunk[:take]
            pos += take
            chunk = self.undigits(self.digits(chunk) @ step)
        self.exp = exp
        log = np.full(self.size, -1, dtype=np.int64)
        log[exp] = np.arange(self.order, dtype=np.int64)
        if (log[1:] < 0).any():
            raise AssertionError("generator does not have full order")
        self.log = log

    def regenerate(self, g):
        """Re-index the log tables relative to another generator g."""
        j = int(self.log[g])
        if gcd(j, self.order) != 1:
            raise ValueError("not a generator")
        jinv = pow(j, -1, self.order) if self.order > 1 else 0
        self.generator = g
        self.exp = self.exp[(np.arange(self.order) * j) % self.order] if self.order > 1 else self.exp
        log = self.log.copy()
        log[1:] = (self.log[1:] * jinv) % self.order if self.order > 1 else 0
        self.log = log

    # vectorized arithmetic on codes

    def add(self, a, b):
        return self.undigits(self.digits(a) + self.digits(b))

    def sub(self, a, b):
        return self.undigits(self.digits(a) - self.digits(b))

    def neg(self, a):
        return self.undigits(-self.digits(a))

    def mul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % self.order]
        return np.where(nz, out, 0)

    def power(self, a, k):
        a = np.asarray(a, dtype=np.int64)
        la = self.log[a]
        out = self.exp[(la * k) % self.order]
        if k == 0:
            return np.ones_like(a)
        return np.where(a != 0, out, 0)

    def inv(self, a):
        return self.power(a, -1 % self.order if self.order > 1 else 1)

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    def minus_one(self):
        return int(self.neg(1))

    def trace(self, a):
        return self.trace_table[np.asarray(a, dtype=np.int64)]

    def info(self):
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus), "generator": int(self.generator)}


class FieldSpec:
    """The base field F_q, q = p^m, together with its tower of levels F_{q^k}."""

    def __init__(self, p, m):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if m < 1:
            raise ValueError("m must be positive")
        self.p, self.m = p, m
        self.q = p ** m
        if self.q > size_limit():
            raise SizeLimitExceeded(f"q = {self.q} exceeds limit")
        self._levels = {}
        base = GF(p, m)
        base.embed = np.arange(base.size, dtype=np.int64)
        self._levels[1] = base
        self.modulus = base.modulus
        self.generator = base.generator

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m})"

    @property
    def base(self):
        return self._levels[1]

    def level(self, k):
        """F_{q^k} with its embedding of F_q and a norm-compatible generator."""
        if k in self._levels:
            return self._levels[k]
        if self.q ** k > size_limit():
            raise SizeLimitExceeded(f"level {k} over q = {self.q} has size {self.q ** k}")
        F = GF(self.p, self.m * k)
        base = self.base
        # embedding: t -> least root of the base modulus
        vals = np.zeros(F.size, dtype=np.int64)
        xs = F.elements()
        for c in reversed(self.modulus):
            vals = F.add(F.mul(vals, xs), c)
        theta = int(np.flatnonzero(vals == 0)[0])
        powers = [1]
        for _ in range(1, self.m):
            powers.append(int(F.mul(powers[-1], theta)))
        bd = base.digits(base.elements())
        embed = np.zeros(base.size, dtype=np.int64)
        for i in range(self.m):
            embed = F.add(embed, F.mul(bd[:, i], powers[i]))
        F.embed = embed
        # generator with N(g) equal to the embedded base generator
        cof = F.order // (self.q - 1)
        target = int(F.log[embed[base.generator]])
        j0 = (target // cof) % (self.q - 1)
        js = np.arange(j0 if j0 else self.q - 1, F.order, self.q - 1)
        ok = np.gcd(js, F.order) == 1
        g = int(F.exp[js[ok]].min())
        F.regenerate(g)
        assert int(F.power(F.generator, cof)) == int(embed[base.generator])
        self._levels[k] = F
        return F

    def embed(self, c, k):
        """Image of base-field codes in F_{q^k}."""
        return self.level(k).embed[np.asarray(c, dtype=np.int64)]

    def norm_exponent(self, k):
        return (self.q ** k - 1) // (self.q - 1)

    def info(self):
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus), "generator": int(self.generator)}


@lru_cache(maxsize=None)
def make_field(p, m=1):
    return FieldSpec(p, m)


@dataclass(frozen=True)
class MulChar:
    """chi(g_l) = zeta_{q^l - 1}^e on F_{q^l}^x, g_l the level-l generator."""

    base: FieldSpec
    l: int
    e: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.modulus)

    @property
    def modulus(self):
        return self.base.q ** self.l - 1

    @classmethod
    def trivial(cls, base, l=1):
        return cls(base, l, 0)

    @classmethod
    def quadratic(cls, base, l=1):
        if base.p == 2:
            raise ValueError("no quadratic character in characteristic 2")
        return cls(base, l, (base.q ** l - 1) // 2)

    @classmethod
    def of_order(cls, base, order, l=1):
        M = base.q ** l - 1
        if M % order:
            raise ValueError(f"no character of order {order} on F_{base.q}^{l}")
        return cls(base, l, M // order)

    def is_trivial(self):
        return self.e == 0

    def is_quadratic(self):
        return self.base.p != 2 and self.e == self.modulus // 2 and self.modulus > 0

    def order(self):
        return self.modulus // gcd(self.e, self.modulus) if self.modulus else 1

    def inverse(self):
        return MulChar(self.base, self.l, -self.e)

    def __mul__(self, other):
        if other.base != self.base or other.l != self.l:
            raise DegreeMismatch("characters on different fields")
        return MulChar(self.base, self.l, self.e + other.e)

    def __pow__(self, k):
        return MulChar(self.base, self.l, self.e * k)

    def pullback(self, L):
        """chi composed with the norm from F_{q^L} down to F_{q^l}."""
        if L % self.l:
            raise DegreeMismatch(f"level {L} is not a multiple of {self.l}")
        if self.l != 1 and L != self.l:
            # only base-level characters have norm-compatible generators
            raise DegreeMismatch("pullback is defined from the base level only")
        return MulChar(self.base, L, self.e * self.base.norm_exponent(L))

    def descends(self):
        """The base-level character whose pullback this is, or None."""
        cof = self.base.norm_exponent(self.l)
        if self.e % cof:
            return None
        return MulChar(self.base, 1, self.e // cof)

    def field(self):
        return self.base.level(self.l)

    def exponent_of(self, x):
        """Return (ord, a) with chi(x) = zeta_ord^a; x nonzero code(s)."""
        F = self.field()
        o = self.order()
        g = gcd(self.e, self.modulus) if self.modulus else 1
        a = (F.log[np.asarray(x, dtype=np.int64)] * (self.e // g)) % o
        return o, a

    def at_minus_one(self):
        return char_eval(self, self.field().minus_one())

    def to_json(self):
        return {"l": self.l, "e": self.e}


def char_eval(chi, x, trivial_at_zero=False):
    """chi(x) for a code x of F_{q^l}; chi(0) = 0 unless asked otherwise."""
    x = int(x)
    if x < 0 or x >= chi.base.q ** chi.l:
        raise DegreeMismatch("element does not belong to the character's field")
    if x == 0:
        return CycloNum.from_rational(1 if (trivial_at_zero and chi.is_trivial()) else 0)
    o, a = chi.exponent_of(x)
    return root_of_unity(o, int(a))


def add_char_eval(base, x, l=1):
    """psi(x) = zeta_p^Tr(x) on F_{q^l}."""
    F = base.level(l)
    x = int(x)
    if x < 0 or x >= F.size:
        raise DegreeMismatch("element outside F_{q^l}")
    return root_of_unity(base.p, int(F.trace(x)))


def norm(base, x, d):
    """N_{F_{q^d}/F_q}(x) as a base-field code."""
    F = base.level(d)
    x = int(x)
    if x == 0:
        return 0
    y = int(F.power(x, base.norm_exponent(d)))
    return int(np.flatnonzero(F.embed == y)[0])


def norm_and_char(chi, x, d):
    """chi(N(x)) for chi on F_q and x a code of F_{q^d}."""
    if chi.l != 1:
        raise DegreeMismatch("norm_and_char takes a base-field character")
    if d == 1:
        return char_eval(chi, x)
    return char_eval(chi.pullback(d), x)


def base_char_exponents(chi, F, x):
    """Exponents a with chi(N x) = zeta_{q-1}^a for codes x of level field F.

    Zeros map to -1.  This is the vectorized workhorse of the oracle.
    """
    x = np.asarray(x, dtype=np.int64)
    lg = F.log[x]
    out = (lg * chi.e) % (chi.base.q - 1) if chi.base.q > 2 else np.zeros_like(lg)
    return np.where(x == 0, -1, out)
