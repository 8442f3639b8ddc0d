"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q[z]/Phi_N(z) as integer numerators over one positive common denominator.
Binary operations lift both operands to the lcm of their conductors.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
import cmath

from .errors import DivisionByZero, ZeroInput


def _lcm(a, b):
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def divisors(n):
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return tuple(sorted(set(small + [n // d for d in small])))


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Coefficients of Phi_n, lowest degree first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(num, den):
    # den is monic with integer coefficients
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    assert not any(num[:dd]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def euler_phi(n):
    return len(cyclotomic_poly(n)) - 1


def _reduce(coeffs, n):
    """Reduce an integer list indexed by exponents (any length) modulo Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    if len(c) > n:
        folded = [0] * n
        for i, v in enumerate(c):
            folded[i % n] += v
        c = folded
    for i in range(len(c) - 1, deg - 1, -1):
        v = c[i]
        if v:
            c[i] = 0
            for j in range(deg):
                c[i - deg + j] -= v * phi[j]
    c = c[:deg]
    return c + [0] * (deg - len(c))


class CycloNum:
    """An exact element of Q(zeta_N)."""

    __slots__ = ("N", "num", "den")

    def __init__(self, N, num, den=1):
        # num must already be reduced, of length phi(N)
        if den < 0:
            num = [-a for a in num]
            den = -den
        g = den
        for a in num:
            if g == 1:
                break
            g = gcd(g, a)
        if g > 1:
            num = [a // g for a in num]
            den //= g
        self.N = N
        self.num = tuple(num)
        self.den = den

    # construction

    @classmethod
    def from_rational(cls, x, N=1):
        x = Fraction(x)
        num = [0] * euler_phi(N)
        num[0] = x.numerator
        return cls(N, num, x.denominator)

    @classmethod
    def from_exponent_counts(cls, N, counts, den=1):
        """sum_e counts[e] * zeta_N^e for integer counts indexed by exponent."""
        counts = [int(c) for c in counts]
        return cls(N, _reduce(counts, N), den)

    @classmethod
    def from_terms(cls, N, terms):
        """Build from (exponent, rational) pairs; exponents taken mod N."""
        fr = [Fraction(0)] * N
        for e, c in terms:
            fr[e % N] += Fraction(c)
        den = 1
        for c in fr:
            den = _lcm(den, c.denominator)
        return cls.from_exponent_counts(N, [c.numerator * (den // c.denominator) for c in fr], den)

    # basic queries

    def coeffs(self):
        return [Fraction(a, self.den) for a in self.num]

    def is_zero(self):
        return not any(self.num)

    def is_rational(self):
        return not any(self.num[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    def lift(self, M):
        """The same element written in Q(zeta_M), M a multiple of N."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"conductor {M} is not a multiple of {self.N}")
        k = M // self.N
        counts = [0] * M
        for i, a in enumerate(self.num):
            counts[i * k] = a
        return CycloNum(M, _reduce(counts, M), self.den)

    def galois(self, a):
        """Apply zeta_N -> zeta_N^a (a prime to N)."""
        if gcd(a, self.N) != 1:
            raise ValueError("Galois exponent must be prime to the conductor")
        counts = [0] * self.N
        for i, c in enumerate(self.num):
            if c:
                counts[(i * a) % self.N] += c
        return CycloNum(self.N, _reduce(counts, self.N), self.den)

    def conj(self):
        return self.galois(-1 % self.N if self.N > 1 else 1)

    def approx(self, prec=None):
        """Complex value, for diagnostics only."""
        if prec is not None:
            import mpmath
            with mpmath.workdps(prec):
                z = sum(a * mpmath.expjpi(mpmath.mpf(2 * i) / self.N)
                        for i, a in enumerate(self.num) if a)
                return complex(z / self.den)
        w = cmath.exp(2j * cmath.pi / self.N)
        return sum(a * w ** i for i, a in enumerate(self.num) if a) / self.den

    # arithmetic

    def _pair(self, other):
        if not isinstance(other, CycloNum):
            other = CycloNum.from_rational(other)
        M = _lcm(self.N, other.N)
        return self.lift(M), other.lift(M), M

    def __add__(self, other):
        a, b, M = self._pair(other)
        den = _lcm(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return CycloNum(M, [x * fa + y * fb for x, y in zip(a.num, b.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.N, [-a for a in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloNum):
            x = Fraction(other)
            return CycloNum(self.N, [a * x.numerator for a in self.num], self.den * x.denominator)
        a, b, M = self._pair(other)
        nz_a = [(i, x) for i, x in enumerate(a.num) if x]
        nz_b = [(j, y) for j, y in enumerate(b.num) if y]
        prod = [0] * (2 * len(a.num))
        for i, x in nz_a:
            for j, y in nz_b:
                prod[i + j] += x * y
        return CycloNum(M, _reduce(prod, M), a.den * b.den)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        nz = [(i, a) for i, a in enumerate(self.num) if a]
        if len(nz) == 1:
            # c * zeta^i has inverse zeta^(N - i) / c
            i, a = nz[0]
            counts = [0] * self.N
            counts[(-i) % self.N] = self.den
            return CycloNum(self.N, _reduce(counts, self.N), a)
        return self._inv_euclid()

    def _inv_euclid(self):
        # extended Euclid in Q[z] against Phi_N
        def trim(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        def divmod_poly(a, b):
            a = list(a)
            q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
            while len(trim(a)) >= len(b):
                c = a[-1] / b[-1]
                k = len(a) - len(b)
                q[k] = c
                for j, bj in enumerate(b):
                    a[k + j] -= c * bj
            return q, a

        def sub(a, b):
            n = max(len(a), len(b))
            a = a + [Fraction(0)] * (n - len(a))
            b = b + [Fraction(0)] * (n - len(b))
            return trim([x - y for x, y in zip(a, b)])

        def mul(a, b):
            if not a or not b:
                return []
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return trim(out)

        r0 = [Fraction(c) for c in cyclotomic_poly(self.N)]
        r1 = trim([Fraction(c, self.den) for c in self.num])
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            qt, rem = divmod_poly(r0, r1)
            r0, r1 = r1, trim(rem)
            s0, s1 = s1, sub(s0, mul(qt, s1))
        c = r1[0]
        return CycloNum.from_terms(self.N, [(i, x / c) for i, x in enumerate(s1)])

    def __truediv__(self, other):
        if not isinstance(other, CycloNum):
            x = Fraction(other)
            if x == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / x)
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        result = CycloNum.from_rational(1, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_rational() == other
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b, _ = self._pair(other)
        return a.den == b.den and a.num == b.num

    __hash__ = None

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs()):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.N}^{i}")
        return " + ".join(terms) if terms else "0"

    # serialization

    def to_json(self):
        return {"N": self.N,
                "terms": [[i, a // gcd(a, self.den), self.den // gcd(a, self.den)]
                          for i, a in enumerate(self.num) if a]}

    @classmethod
    def from_json(cls, obj):
        N = int(obj["N"])
        terms = [(int(e), Fraction(int(n), int(d))) for e, n, d in obj["terms"]]
        if any(e >= euler_phi(N) or e < 0 for e, _ in terms):
            raise ValueError("CycloNum exponents must lie in 0..phi(N)-1")
        return cls.from_terms(N, terms)


def root_of_unity(N, k):
    counts = [0] * N
    counts[k % N] = 1
    return CycloNum(N, _reduce(counts, N))


def one():
    return CycloNum.from_rational(1)


def zero():
    return CycloNum.from_rational(0)


def is_signed_q_power(z, q):
    """Return (sign, m) with z == sign * q**m, or None."""
    if z.is_zero():
        raise ZeroInput("is_signed_q_power of zero")
    if not z.is_rational():
        return None
    x = z.to_rational()
    sign = 1 if x > 0 else -1
    x = abs(x)
    m = 0
    num, den = x.numerator, x.denominator
    while num % q == 0 and num > 1:
        num //= q
        m += 1
    while den % q == 0 and den > 1:
        den //= q
        m -= 1
    if num == 1 and den == 1:
        return sign, m
    return None
