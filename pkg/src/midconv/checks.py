"""The acceptance grids AC-1 .. AC-8, shared by `midconv check` and the tests.

Each `ac*` function returns an ACResult.  Instances are generated from a
fixed seed so that every run visits the same configurations.
"""

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .charsum import (char_sum, gauss_pair_identity_check, gauss_sum, jacobi_gauss_relation_check,
                      jacobi_sum)
from .cyclo import CycloNum, is_signed_q_power, one
from .epsilon import (EpsilonContext, det_h1c, det_mc, epsilon0_block, epsilon0_block_graded, epsilon0_point,
                      invariant_stalk_det, middle_stalk_det, quadratic_det_check)
from .errors import MidconvError
from .field import MulChar, make_field
from .localdata import (ALL_CONVENTIONS, PINNED, LocalData, PointOrbit, TameBlock, kummer_sheaf,
                        tate_twist, twist_unramified)
from .mc import infinity_consistent, local_det_consistent, mc_rank, mc_sheaf
from .oracle import (ExplicitSheaf, charpoly_frobenius, mc_charpoly, recover_dimension_from,
                     stalk_charpoly)

SEED = 20240611


@dataclass
class ACResult:
    id: str
    passed: bool
    summary: str
    details: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self):
        return f"{self.id} {'PASS' if self.passed else 'FAIL'} ({self.seconds:.1f}s) {self.summary}"

    def to_json(self):
        return {"id": self.id, "passed": self.passed, "summary": self.summary,
                "details": self.details, "seconds": round(self.seconds, 3)}


def _timed(fn):
    def wrapper(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _chars(B):
    return [MulChar(B, 1, e) for e in range(B.q - 1)]


def _quadratics(B):
    """Monic irreducible quadratics over the base field, as points."""
    out = []
    for c0 in range(B.q):
        for c1 in range(B.q):
            pt = PointOrbit(B, (c0, c1, 1))
            if not len(pt.roots(1)):
                out.append(pt)
    return out


# AC-1

AC1_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1), (5, 2), (3, 3), (7, 2)]


@_timed
def ac1(fields=AC1_FIELDS):
    """Orthogonality, g(chi) g(chi^-1) = chi(-1) q and J = -g g'/g(chi chi')."""
    bad = []
    counts = {"orthogonality": 0, "gauss_pair": 0, "jacobi": 0}
    for p, m in fields:
        B = make_field(p, m)
        chars = _chars(B)
        for chi in chars:
            s = char_sum(chi)
            want = B.q - 1 if chi.is_trivial() else 0
            counts["orthogonality"] += 1
            if s != want:
                bad.append(f"q={B.q} sum chi_{chi.e} = {s}")
            if chi.is_trivial():
                continue
            counts["gauss_pair"] += 1
            if not gauss_pair_identity_check(chi):
                bad.append(f"q={B.q} g g-bar for chi_{chi.e}")
        for a in chars[1:]:
            for b in chars[1:]:
                if (a * b).is_trivial():
                    continue
                counts["jacobi"] += 1
                if not jacobi_gauss_relation_check(a, b):
                    bad.append(f"q={B.q} Jacobi ({a.e}, {b.e})")
    qs = ",".join(str(p ** m) for p, m in fields)
    return ACResult("AC-1", not bad, f"q in {{{qs}}}: {counts}", bad[:20])


# AC-2

def _random_block(rng, B, degree):
    while True:
        # block level deg(s) * l stays <= 2 so Gauss sums have small conductors
        l = rng.choice([1, 1, 1, 2]) if degree == 1 else 1
        n = rng.choice([1, 1, 2, 3])
        mult = rng.choice([1, 1, 2])
        level = degree * l
        M = B.q ** level - 1
        e = rng.randrange(M)
        chi = MulChar(B, level, e)
        if l > 1:
            # induced blocks need a character with a full Frobenius orbit
            qs = B.q ** degree
            if chi.is_trivial() or (e * qs) % M == e:
                continue
        alpha = CycloNum.from_exponent_counts(B.q - 1, [0] * (B.q - 2) + [1]) if B.q > 2 else one()
        alpha = alpha * rng.choice([1, -1, Fraction(1, B.q), B.q])
        return TameBlock(n, l, chi, alpha, mult)


@_timed
def ac2(nblocks=240, seed=SEED):
    """Epsilon calculus: direct sums, Tate twist, unramified twist, closed form vs Gr^M."""
    rng = random.Random(seed)
    bad = []
    tally = dict(blocks=0, sums=0)
    fields = [make_field(3), make_field(5), make_field(7), make_field(3, 2)]
    for i in range(nblocks):
        B = rng.choice(fields)
        degree = rng.choice([1, 1, 2])
        b1 = _random_block(rng, B, degree)
        b2 = _random_block(rng, B, degree)
        L1 = LocalData((b1,), degree)
        L2 = LocalData((b2,), degree)
        qs = B.q ** degree
        tally["blocks"] += 2
        tally["sums"] += 1
        e1 = epsilon0_block(b1, degree, B)
        if epsilon0_block_graded(b1, degree, B) != e1:
            bad.append(f"graded expansion differs for {b1}")
        e2 = epsilon0_block(b2, degree, B)
        if epsilon0_point(L1 + L2, one(), B) != e1 * e2:
            bad.append(f"multiplicativity fails for {b1} + {b2}")
        m = rng.choice([-2, -1, 1, 2])
        lhs = epsilon0_point(tate_twist(L1, m, B), one(), B)
        rhs = CycloNum.from_rational(Fraction(qs) ** (-m * L1.rank())) * e1
        if lhs != rhs:
            bad.append(f"Tate twist {m} fails for {b1}")
        beta = CycloNum.from_exponent_counts(B.q - 1, [0] * (rng.randrange(B.q - 1)) + [1]) \
            * rng.choice([1, -1, B.q])
        lhs = epsilon0_point(twist_unramified(L1, beta), one(), B)
        if lhs != beta ** L1.rank() * e1:
            bad.append(f"unramified twist fails for {b1}")
    return ACResult("AC-2", not bad, f"{tally['blocks']} generated blocks, {tally['sums']} direct sums",
                    bad[:20])


# AC-3 / AC-4 instances

@dataclass
class Instance:
    base: object
    factors: list
    chi: MulChar
    ys: list

    def label(self):
        fs = ", ".join(f"{list(s.coeffs)}:{eta.e}" for s, eta in self.factors)
        return f"q={self.base.q} chi_{self.chi.e} [{fs}]"

    def sheaf(self):
        return kummer_sheaf(self.base, self.factors)

    def explicit(self):
        return ExplicitSheaf(self.base, self.factors)

    def total_degree(self):
        return sum(s.degree for s, _ in self.factors)

    def has_degree_two(self):
        return any(s.degree == 2 for s, _ in self.factors)


def _standard_factors(rng, B, chi, pts):
    """Characters on pts, all nontrivial, with prod eta^deg = chi^-1."""
    chars = _chars(B)[1:]
    for _ in range(200):
        etas = [rng.choice(chars) for _ in pts[:-1]]
        acc = chi.inverse()
        for s, eta in zip(pts, etas):
            acc = acc * (eta ** s.degree).inverse()
        last = pts[-1]
        if last.degree == 1:
            cand = [acc]
        else:
            cand = [c for c in chars if c ** last.degree == acc]
        cand = [c for c in cand if not c.is_trivial()]
        if cand:
            return list(zip(pts, etas + [rng.choice(cand)]))
    return None


def _cubics(B):
    out = []
    for c0 in range(1, B.q):
        for c1 in range(B.q):
            for c2 in range(B.q):
                pt = PointOrbit(B, (c0, c1, c2, 1))
                if not len(pt.roots(1)):
                    out.append(pt)
    return out


AC3_PLANS = [((3, 1), 2, 4), ((5, 1), 2, 6), ((5, 1), 4, 7), ((7, 1), 2, 6), ((3, 2), 2, 7),
             ((3, 2), 4, 7)]


def ac3_instances(seed=SEED):
    """Standard Kummer configurations of total degree <= 4 leaving >= 3 rational y free.

    Over F_3 every point must be non-rational; chi^2 = 1 there rules out a
    pair of quadratics, so irreducible cubics are used.
    """
    rng = random.Random(seed)
    out = []
    seen = set()
    for (p, m), order, count in AC3_PLANS:
        B = make_field(p, m)
        chi = MulChar.of_order(B, order)
        quads = _quadratics(B)
        cubics = _cubics(B) if B.q == 3 else []
        made = 0
        for attempt in range(2000):
            if made >= count:
                break
            if cubics:
                pts = [rng.choice(cubics)]
            else:
                pts = [rng.choice(quads)] if made % 2 == 0 else []
                budget = 4 - sum(s.degree for s in pts)
                nrat = rng.randint(max(2 - len(pts), 1), min(budget, B.q - 3))
                pts += [PointOrbit.rational(B, a) for a in rng.sample(range(B.q), nrat)]
            fac = _standard_factors(rng, B, chi, pts)
            if fac is None:
                continue
            key = (B.q, chi.e, tuple(sorted((s.coeffs, eta.e) for s, eta in fac)))
            if key in seen:
                continue
            seen.add(key)
            F = kummer_sheaf(B, fac)
            ys = [y for y in range(B.q) if not F.in_S(y)]
            rng.shuffle(ys)
            out.append(Instance(B, fac, chi, sorted(ys[:3])))
            made += 1
    return out


@_timed
def ac3(instances=None):
    """det_h1c and det_mc against Newton-identity determinants of the oracle."""
    instances = instances or ac3_instances()
    bad = []
    n = 0
    for inst in instances:
        F, E = inst.sheaf(), inst.explicit()
        d = F.rank * F.total_degree()
        r = mc_rank(F, inst.chi)
        for y in inst.ys:
            n += 1
            h = det_h1c(F, inst.chi, y)
            ho = charpoly_frobenius(E, inst.chi, y, d=d).det
            if h != ho:
                bad.append(f"{inst.label()} y={y}: det_h1c {h} vs oracle {ho}")
            m = det_mc(F, inst.chi, y)
            mo = mc_charpoly(E, inst.chi, y, d=r).det
            if m != mo:
                bad.append(f"{inst.label()} y={y}: det_mc {m} vs oracle {mo}")
    ndeg2 = sum(i.has_degree_two() for i in instances)
    orders = sorted({i.chi.order() for i in instances})
    qs = sorted({i.base.q for i in instances})
    ok = not bad and len(instances) >= 30 and ndeg2 >= 5 and all(len(i.ys) >= 3 for i in instances)
    return ACResult("AC-3", ok, f"{len(instances)} configurations over q in {qs}, chi orders {orders}, "
                    f"{ndeg2} with a degree-2 point, {n} sample points", bad[:20])


@_timed
def ac4(instances=None):
    """Rank and local data of MC_chi against oracle dimensions and stalks."""
    instances = instances or ac3_instances()
    bad = []
    probes = 0
    for inst in instances:
        B, chi = inst.base, inst.chi
        F, E = inst.sheaf(), inst.explicit()
        G = mc_sheaf(F, chi)
        y0 = inst.ys[0]
        d = F.rank * F.total_degree()
        dh = recover_dimension_from(lambda k: E.to_cyclo(E.h1c_power_sum(chi, y0, k)))
        if dh != d:
            bad.append(f"{inst.label()}: H^1_c dimension {dh}, expected {d}")
        dm = recover_dimension_from(lambda k: E.to_cyclo(E.mc_stalk_power_sum(chi, y0, k)))
        if dm != G.rank:
            bad.append(f"{inst.label()}: mc_rank {G.rank}, oracle {dm}")
        # determinant character: the product of local inertia characters
        for y in range(B.q):
            if F.in_S(y):
                continue
            probes += 1
            orc = mc_charpoly(E, chi, y, d=G.rank).det
            if G.stalk_det(y) != orc:
                bad.append(f"{inst.label()}: det character at y={y}")
        # invariants at rational singular points: dimension and Frobenius
        for s in G.points:
            if not s.is_rational():
                continue
            v = s.rational_value()
            L = G.local(s)
            fn = lambda k, v=v: E.to_cyclo(E.mc_stalk_power_sum(chi, v, k))
            di = recover_dimension_from(fn)
            probes += 1
            if di != L.invariant_dim():
                bad.append(f"{inst.label()}: invariants at {v}: {L.invariant_dim()} vs oracle {di}")
                continue
            sym = invariant_stalk_det(G, s)
            if sym is not None and di and sym != mc_charpoly(E, chi, v, d=di).det:
                bad.append(f"{inst.label()}: invariant Frobenius at {v}")
        for s in G.points:
            if local_det_consistent(G, s) is False:
                bad.append(f"{inst.label()}: local determinant at {s.to_json()}")
        if infinity_consistent(G) is False:
            bad.append(f"{inst.label()}: characters at infinity")
    return ACResult("AC-4", not bad, f"{len(instances)} configurations, {probes} stalk probes", bad[:20])


# AC-5

def ac5_instances():
    """Kummer data with a character chi^-1 at a rational point: MC_chi creates J_2 there."""
    out = []
    for p, order, (u, v) in [(3, 2, (1, 2)), (5, 4, (1, 2)), (5, 2, (1, 3)), (7, 2, (1, 3)),
                             (7, 6, (2, 5))]:
        B = make_field(p)
        chi = MulChar.of_order(B, order)
        chars = _chars(B)[1:]
        rng = random.Random(SEED + p * order)
        for _ in range(100):
            a = rng.choice(chars)
            b = a.inverse()  # keeps the product equal to chi^-1
            if b.is_trivial() or (a * chi).is_trivial():
                continue
            fac = [(PointOrbit.rational(B, 0), chi.inverse()),
                   (PointOrbit.rational(B, u), a),
                   (PointOrbit.rational(B, v), b)]
            F = kummer_sheaf(B, fac)
            if F.is_standard(chi):
                ys = [y for y in range(B.q) if not F.in_S(y)][:3]
                out.append(Instance(B, fac, chi, ys))
                break
    return out


def _convention_passes(conv, instances, oracle_cache):
    fails = []
    for idx, inst in enumerate(instances):
        chi, cinv = inst.chi, inst.chi.inverse()
        F = inst.sheaf()
        E1 = oracle_cache.setdefault(idx, inst.explicit().mc(chi))
        G = mc_sheaf(F, chi, conv)
        s0 = PointOrbit.rational(inst.base, 0)
        if not any(b.trivial and b.n >= 2 for b in G.local(s0).blocks):
            fails.append(f"{inst.label()}: no unipotent J_2 block")
            continue
        E0 = inst.explicit()
        key = ("inv", idx)
        if key not in oracle_cache:
            di = G.local(s0).invariant_dim()
            oracle_cache[key] = mc_charpoly(E0, chi, 0, d=di).det
        if invariant_stalk_det(G, s0, conv) != oracle_cache[key]:
            fails.append(f"{inst.label()}: invariant stalk at 0")
        d = G.rank * G.total_degree()
        r2 = mc_rank(G, cinv)
        for y in inst.ys:
            kh, km = ("h", idx, y), ("m", idx, y)
            if kh not in oracle_cache:
                oracle_cache[kh] = charpoly_frobenius(E1, cinv, y, d=d).det
                oracle_cache[km] = mc_charpoly(E1, cinv, y, d=r2).det
            try:
                if det_h1c(G, cinv, y) != oracle_cache[kh]:
                    fails.append(f"{inst.label()}: nested det_h1c at y={y}")
                if det_mc(G, cinv, y, EpsilonContext(inst.base, conv)) != oracle_cache[km]:
                    fails.append(f"{inst.label()}: nested det_mc at y={y}")
            except MidconvError as ex:
                fails.append(f"{inst.label()}: {ex.code}")
    return fails


@_timed
def ac5():
    """Exactly one eigenspace-weight / quotient-twist combination matches the oracle."""
    instances = ac5_instances()
    cache = {}
    passing = []
    details = []
    for conv in ALL_CONVENTIONS:
        fails = _convention_passes(conv, instances, cache)
        tag = f"({conv.eigenspace_weight}, t={conv.quotient_twist})"
        details.append(f"{tag}: {'pass' if not fails else str(len(fails)) + ' mismatches'}")
        if not fails:
            passing.append(conv)
    ok = len(passing) == 1 and passing[0] == PINNED and len(instances) >= 3
    summ = f"{len(instances)} J_2 instances; passing: " + \
        (", ".join(f"({c.eigenspace_weight}, t={c.quotient_twist})" for c in passing) or "none")
    return ACResult("AC-5", ok, summ, details)


# AC-6

def ac6_instances():
    out = []
    specs = {
        3: [[(0,), (1,), (2,)], [(0,), ((1, 0, 1),)], [(1,), ((1, 0, 1),)], [(0,), ((2, 1, 1),)],
            [(2,), ((2, 2, 1),)]],
        5: [[(0,), (1,), (2,)], [(0,), (1,), (3,)], [(0,), ((2, 0, 1),)], [(1,), (2,), (4,)]],
        # S must leave a rational point free: the determinant constant is fitted there
        7: [[(0,), (1,), (2,)], [(0,), ((1, 0, 1),)], [(0,), (1,), (3,)], [(2,), (3,), (6,)],
            [(0,), (1,), (2,), (3,), (4,)]],
    }
    for p, plist in specs.items():
        B = make_field(p)
        minus = MulChar.quadratic(B)
        for pts in plist:
            fac = []
            for c in pts:
                if isinstance(c[0], int):
                    fac.append((PointOrbit.rational(B, c[0]), minus))
                else:
                    fac.append((PointOrbit(B, c[0]).validate(), minus))
            out.append(Instance(B, fac, minus, list(range(B.q))))
    return out


@_timed
def ac6():
    """Quadratic determinants: MC_{-1} keeps det = +-q^m and hypotheses (i)-(iii)."""
    instances = ac6_instances()
    bad = []
    points = 0
    for inst in instances:
        F, E = inst.sheaf(), inst.explicit()
        try:
            rep = quadratic_det_check(F, inst.ys)
        except MidconvError as ex:
            bad.append(f"{inst.label()}: {ex}")
            continue
        G = rep["output_sheaf"]
        for y in inst.ys:
            points += 1
            if G.in_S(y):
                s = [t for t in G.points if t.is_rational() and t.rational_value() == y][0]
                dim = G.local(s).invariant_dim()
            else:
                dim = G.rank
            orc = mc_charpoly(E, inst.chi, y, d=dim).det if dim else one()
            if is_signed_q_power(orc, inst.base.q) is None:
                bad.append(f"{inst.label()} y={y}: oracle det {orc} is not +-q^m")
            if middle_stalk_det(G, y) != orc:
                bad.append(f"{inst.label()} y={y}: symbolic {middle_stalk_det(G, y)} vs oracle {orc}")
    return ACResult("AC-6", not bad and len(instances) >= 10,
                    f"{len(instances)} instances over q in {{3,5,7}}, {points} sample points", bad[:20])


# AC-7

def ac7_instances():
    """(base, factors, chi, extra) with extra = a first convolution raising the rank."""
    out = []
    for p, m, order in [(5, 1, 2), (3, 2, 2), (3, 2, 4), (13, 1, 2), (13, 1, 6), (5, 1, 4), (7, 1, 2),
                        (3, 1, 2)]:
        B = make_field(p, m)
        chi = MulChar.of_order(B, order)
        rng = random.Random(SEED + 31 * B.q + order)
        for _ in range(200):
            pts = [PointOrbit.rational(B, a) for a in rng.sample(range(B.q), 2)]
            fac = _standard_factors(rng, B, chi, pts)
            if fac is None:
                continue
            F = kummer_sheaf(B, fac)
            ys = [y for y in range(B.q) if not F.in_S(y)][:3]
            if len(ys) >= 1:
                out.append(Instance(B, fac, chi, ys))
                break
    return out


@_timed
def ac7():
    """MC_{chi^-1} MC_chi = Tate twist (-1), at charpoly level.

    The literal statement is tested where chi(-1) = 1.  Where chi(-1) = -1 the
    oracle shows an extra factor chi(-1) on every eigenvalue; those instances
    are checked against that corrected statement and listed in the details.
    """
    bad = []
    literal = 0
    corrected = 0
    details = []
    for inst in ac7_instances():
        B, chi = inst.base, inst.chi
        q = CycloNum.from_rational(B.q)
        E = inst.explicit()
        twice = E.mc(chi).mc(chi.inverse())
        sign = chi.at_minus_one()
        F = inst.sheaf()
        G = mc_sheaf(mc_sheaf(F, chi), chi.inverse())
        for y in inst.ys:
            before = stalk_charpoly(E, y, d=1)
            after = stalk_charpoly(twice, y, d=1)
            if sign == 1:
                literal += 1
                if after != before.twisted(q):
                    bad.append(f"{inst.label()} y={y}: literal involution fails")
            else:
                corrected += 1
                if after != before.twisted(q * sign):
                    bad.append(f"{inst.label()} y={y}: corrected involution fails")
                if after == before.twisted(q):
                    bad.append(f"{inst.label()} y={y}: unexpected literal agreement")
            if G.stalk_det(y) != F.stalk_det(y) * q * sign:
                bad.append(f"{inst.label()} y={y}: symbolic determinant")
        details.append(f"{inst.label()}: chi(-1) = {sign}")
    ninst = sum(1 for i in ac7_instances() if i.chi.at_minus_one() == 1)
    ok = not bad and ninst >= 5 and literal >= 15
    return ACResult("AC-7", ok, f"{ninst} instances with chi(-1)=1 ({literal} points, literal); "
                    f"{corrected} points with chi(-1)=-1 (twist by chi(-1) q)", bad[:20] + details)


# AC-8

def _bench_workload(workers):
    """Field enumerations over F_{3^11} and F_{3^12}: MC stalk traces and a Gauss sum."""
    B = make_field(3)
    chi = MulChar.quadratic(B)
    fac = [(PointOrbit.rational(B, a), chi) for a in range(3)]
    E = ExplicitSheaf(B, fac)
    sums = [E.mc_stalk_power_sum(chi, 1, k, workers) for k in (11, 12)]
    g = gauss_sum(chi.pullback(12), workers)
    return [s.tolist() for s in sums], g.to_json()


@_timed
def ac8(suite_seconds=None, workers=4):
    """Single-threaded suite time and the 4-way field-enumeration speedup."""
    import os
    _bench_workload(1)  # warm the field tables so both timings measure enumeration only
    t0 = time.perf_counter()
    serial = _bench_workload(1)
    t1 = time.perf_counter()
    par = _bench_workload(workers)
    t2 = time.perf_counter()
    speed = (t1 - t0) / max(t2 - t1, 1e-9)
    identical = serial == par
    cpus = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count()
    parts = [f"speedup {speed:.2f}x with {workers} workers on {cpus} cpu(s)",
             f"bit-identical: {identical}"]
    ok = identical and speed >= 2.0
    if suite_seconds is not None:
        parts.append(f"suite {suite_seconds:.1f}s")
        ok = ok and suite_seconds < 300
    return ACResult("AC-8", ok, ", ".join(parts))


ALL = [ac1, ac2, ac3, ac4, ac5, ac6, ac7]


def run_all(workers=4, log=None):
    results = []
    t0 = time.perf_counter()
    inst = ac3_instances()
    for fn in ALL:
        res = fn(inst) if fn in (ac3, ac4) else fn()
        results.append(res)
        if log:
            log(res.line())
    suite = time.perf_counter() - t0
    res = ac8(suite_seconds=suite, workers=workers)
    results.append(res)
    if log:
        log(res.line())
    return results
