"""Gauss and Jacobi sums, evaluated exactly by enumerating the field."""

from math import gcd

import numpy as np

from .cyclo import CycloNum
from .errors import DegreeMismatch
from .parallel import summed


def _lcm(a, b):
    return a // gcd(a, b) * b


def gauss_sum(chi, workers=1):
    """g(chi) = -sum_{x != 0} chi(x) psi(x); equal to 1 for trivial chi."""
    if chi.is_trivial():
        return CycloNum.from_rational(1)
    F = chi.field()
    p = chi.base.p
    o = chi.order()
    N = p * o

    def task(start, stop):
        xs = np.arange(start + 1, stop + 1, dtype=np.int64)
        _, a = chi.exponent_of(xs)
        b = F.trace(xs)
        return np.bincount((a * p + b * o) % N, minlength=N)

    counts = summed(task, F.order, workers)
    return -CycloNum.from_exponent_counts(N, counts)


def jacobi_sum(chi1, chi2, workers=1):
    """J(chi1, chi2) = sum_a chi1(a) chi2(1 - a), with chi(0) = 0 for every chi."""
    if chi1.base != chi2.base or chi1.l != chi2.l:
        raise DegreeMismatch("Jacobi sum of characters on different fields")
    F = chi1.field()
    o1, o2 = chi1.order(), chi2.order()
    N = _lcm(o1, o2)

    def task(start, stop):
        a = np.arange(start, stop, dtype=np.int64)
        b = F.sub(1, a)
        keep = (a != 0) & (b != 0)
        a, b = a[keep], b[keep]
        _, ea = chi1.exponent_of(a)
        _, eb = chi2.exponent_of(b)
        return np.bincount((ea * (N // o1) + eb * (N // o2)) % N, minlength=N)

    counts = summed(task, F.size, workers)
    return CycloNum.from_exponent_counts(N, counts)


def char_sum(chi):
    """sum over F^x of chi(x)."""
    F = chi.field()
    o = chi.order()
    _, a = chi.exponent_of(np.arange(1, F.size))
    return CycloNum.from_exponent_counts(o, np.bincount(a, minlength=o))


def gauss_pair_identity_check(chi):
    """g(chi) g(chi^-1) == chi(-1) q^l."""
    if chi.is_trivial():
        raise ValueError("identity needs a nontrivial character")
    lhs = gauss_sum(chi) * gauss_sum(chi.inverse())
    return lhs == chi.at_minus_one() * chi.base.q ** chi.l


def jacobi_gauss_relation_check(chi1, chi2):
    """J(chi1, chi2) g(chi1 chi2) == -g(chi1) g(chi2) when all three are nontrivial.

    Stated without division so that large conductors stay cheap.
    """
    prod = chi1 * chi2
    if chi1.is_trivial() or chi2.is_trivial() or prod.is_trivial():
        raise ValueError("relation needs chi1, chi2 and chi1 chi2 nontrivial")
    return jacobi_sum(chi1, chi2) * gauss_sum(prod) == -(gauss_sum(chi1) * gauss_sum(chi2))
