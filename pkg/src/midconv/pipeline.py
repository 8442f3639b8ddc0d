"""Convolution sequences: alternating middle tensors and middle convolutions.

The symbolic track (SheafData) and, optionally, an oracle track
(ExplicitSheaf) are advanced together; after each step determinants and the
rank are compared exactly at the sample points.
"""

from dataclasses import dataclass, field
from typing import Optional

from .charsum import jacobi_sum
from .cyclo import one
from .errors import CrossCheckFailed, MidconvError, PointCollision, UnknownStalk
from .field import MulChar, char_eval
from .localdata import (PINNED, DetSheaf, LocalData, SheafData, TameBlock,
                        twist_block, twist_unramified)
from .mc import mc_local, mc_rank, mc_sheaf, rigidity_index
from .oracle import ExplicitSheaf, mc_charpoly, recover_dimension_from, stalk_charpoly


# steps

@dataclass(frozen=True)
class PipelineStep:
    op: str  # "MT" or "MC"
    chi: MulChar
    point: Optional[object] = None

    def __post_init__(self):
        if self.op not in ("MT", "MC"):
            raise ValueError(f"unknown step {self.op}")
        if self.op == "MT" and self.point is None:
            raise ValueError("MT needs a point")

    @classmethod
    def MT(cls, eta, a):
        return cls("MT", eta, a)

    @classmethod
    def MC(cls, chi):
        return cls("MC", chi)

    def to_json(self):
        out = {"op": self.op, "chi_e": self.chi.e}
        if self.point is not None:
            out["point"] = self.point.to_json()
        return out


def constant_sheaf(base):
    inf = LocalData((TameBlock(1, 1, MulChar.trivial(base), one()),), 1)
    hints = {y: one() for y in range(base.q)}
    return SheafData(base, (), inf, 1, hints, DetSheaf(one(), ()))


# middle tensor on symbolic data

def _pulled(eta, L):
    return eta if L == 1 else eta.pullback(L)


def _unit_at(eta, a):
    """eta(N(P_a'(sigma))) for a root sigma of a."""
    d = a.degree
    z = int(a.derivative_at([a.root()], d)[0])
    return char_eval(_pulled(eta, d), z)


def _value_at(eta, a, s):
    """eta(N(P_a(sigma_s))) for a root sigma_s of s."""
    d = s.degree
    z = int(a.evaluate([s.root()], d)[0])
    if z == 0:
        raise PointCollision(f"{a} meets {s}")
    return char_eval(_pulled(eta, d), z)


def _smooth(L):
    return all(b.trivial and b.n == 1 for b in L.blocks)


def middle_tensor(F, eta, a):
    """j_*(F (x) L_eta(P_a(x))) as symbolic data."""
    if eta.is_trivial():
        return F
    base = F.base
    r = F.rank
    a.validate()
    beta = _unit_at(eta, a)
    sing = []
    new_hints = {}
    found = False
    for s, L in F.singular:
        if s == a:
            found = True
            blocks = []
            for b in L.blocks:
                chi = b.chi * _pulled(eta, s.degree * b.l)
                nb = twist_block(b, beta)
                nb = TameBlock(b.n, b.l, chi, nb.alpha, b.mult)
                if chi.is_trivial() and b.n > 1:
                    # a cancelled character leaves an invariant line whose
                    # Frobenius scalar the local data does not pin down
                    nb = nb.with_alpha(None)
                blocks.append(nb)
            L2 = LocalData(tuple(blocks), L.degree)
            if _smooth(L2):
                if a.degree == 1:
                    val = one()
                    for b in blocks:
                        val = None if (val is None or b.alpha is None) else val * b.alpha
                    new_hints[a.rational_value()] = val
                continue
            sing.append((s, L2))
        else:
            sing.append((s, twist_unramified(L, _value_at(eta, a, s))))
    if not found:
        if F.det_sheaf is not None:
            D = F.det_sheaf.at_point(a)
        elif a.degree == 1:
            D = F.stalk_det(a.rational_value())
        else:
            D = None
        alpha = None if D is None else D * beta ** r
        sing.append((a, LocalData((TameBlock(1, 1, _pulled(eta, a.degree), alpha, r),), a.degree)))
    inf_blocks = tuple(TameBlock(b.n, b.l, b.chi * _pulled(eta, b.l) ** (-a.degree),
                                 b.alpha, b.mult) for b in F.infinity.blocks)
    infinity = LocalData(inf_blocks, 1)
    ds = F.det_sheaf
    if ds is not None:
        nus = dict(ds.nus)
        nus[a] = nus.get(a, MulChar.trivial(base)) * eta ** r
        ds = DetSheaf(ds.c, tuple((s, nu) for s, nu in nus.items() if not nu.is_trivial()))
    hints = {}
    for y, v in F.stalk_det_hint.items():
        if a.degree == 1 and a.rational_value() == y:
            continue
        if v is None:
            continue
        hints[y] = v * char_eval(eta, int(a.evaluate([y], 1)[0])) ** r
    for y, v in new_hints.items():
        if v is not None:
            hints[y] = v
    return SheafData(base, tuple(sing), infinity, r, hints, ds)


# the state machine

@dataclass
class PipelineState:
    sheaf: SheafData
    explicit: Optional[ExplicitSheaf] = None
    log: list = field(default_factory=list)


def initial_state(base, kummer=None, with_oracle=False):
    from .localdata import kummer_sheaf
    if kummer:
        F = kummer_sheaf(base, kummer)
    else:
        F = constant_sheaf(base)
    E = ExplicitSheaf(base, kummer or ()) if with_oracle else None
    return PipelineState(F, E)


def _sample_points(F, samples):
    ys = [y for y in (samples if samples is not None else range(F.base.q)) if not F.in_S(y)]
    return ys


def apply_step(state, step, conv=PINNED, samples=None, max_samples=3):
    F = state.sheaf
    E = state.explicit
    if step.op == "MT":
        G = middle_tensor(F, step.chi, step.point)
        E2 = None if E is None else E.mt(step.chi, step.point)
    else:
        G = mc_sheaf(F, step.chi, conv, require_standard=False)
        E2 = None if E is None else E.mc(step.chi)
    entry = {"step": step.to_json(), "rank": G.rank, "checks": []}
    if E2 is not None:
        try:
            entry["checks"] = cross_check(G, E2, _sample_points(G, samples)[:max_samples],
                                          parent=(F, E, step))
        except UnknownStalk as ex:
            # the oracle can no longer evaluate this history; continue symbolically
            entry["oracle_dropped"] = str(ex)
            E2 = None
    state.log.append(entry)
    return PipelineState(G, E2, state.log)


def cross_check(G, E, ys, parent=None):
    """Exact comparison of stalk determinants and rank; raises CrossCheckFailed."""
    out = []
    for y in ys:
        if parent is not None and parent[2].op == "MC":
            F0, E0, step = parent
            fn = lambda k: E0.to_cyclo(E0.mc_stalk_power_sum(step.chi, y, k))
        else:
            fn = lambda k: E.to_cyclo(E.trace_vector(int(E.base.embed(y, k)), k))
        D = recover_dimension_from(fn, dmax=G.rank + 2)
        if D != G.rank:
            raise CrossCheckFailed(f"rank {G.rank} but the oracle sees {D} at y = {y}")
        sym = G.stalk_det(y)
        if sym is None:
            out.append({"y": y, "rank": D, "det": None})
            continue
        if parent is not None and parent[2].op == "MC":
            orc = mc_charpoly(E0, step.chi, y, d=D).det
        else:
            orc = stalk_charpoly(E, y, d=D).det
        if sym != orc:
            raise CrossCheckFailed(f"stalk determinant at y = {y}: {sym} vs oracle {orc}")
        out.append({"y": y, "rank": D, "det": sym.to_json()})
    return out


def run_pipeline(base, steps, kummer=None, with_oracle=False, conv=PINNED, samples=None):
    state = initial_state(base, kummer, with_oracle)
    for step in steps:
        state = apply_step(state, step, conv, samples)
    return state


def transcript(base, steps, state, conv=PINNED, kummer=None):
    from .serialize import sheaf_to_json
    return {
        "conventions": conv.to_json(),
        "base": {"p": base.p, "m": base.m},
        "start": [{"point": s.to_json(), "chi_e": eta.e} for s, eta in (kummer or ())],
        "steps": [s.to_json() for s in steps],
        "log": state.log,
        "final": sheaf_to_json(state.sheaf),
        "rigidity_index": rigidity_index(state.sheaf),
    }


# associativity

def _char_multiset(L):
    out = {}
    for b in L.blocks:
        key = (b.n, b.l, b.chi.l, b.chi.e)
        out[key] = out.get(key, 0) + b.mult
    return sorted(out.items())


def _mc_local_free(F, chi, s, conv):
    return mc_local(F, chi, s, conv, rank=mc_rank(F, chi, require_standard=False))


def associativity_probe(F, chi1, chi2, conv=PINNED, explicit=None, ys=None):
    """Compare MC_chi2(MC_chi1(F)) with MC_{chi1 chi2}(F) (x) (-J(chi1, chi2)).

    Report only: each comparison records agreement or the differing values.
    """
    report = {"chi1": chi1.e, "chi2": chi2.e, "items": []}

    def item(name, a, b):
        report["items"].append({"name": name, "agree": a == b,
                                "left": a if a == b else repr(a), "right": repr(b)})

    prod = chi1 * chi2
    if prod.is_trivial():
        report["note"] = "chi2 = chi1^-1: involution"
    try:
        G1 = mc_sheaf(F, chi1, conv, require_standard=False)
        left_rank = mc_rank(G1, chi2, require_standard=False)
        if prod.is_trivial():
            right_rank = F.rank
        else:
            right_rank = mc_rank(F, prod, require_standard=False)
        item("rank", left_rank, right_rank)
        if not prod.is_trivial():
            for s in F.points:
                left = _char_multiset(_mc_local_free(G1, chi2, s, conv))
                right = _char_multiset(_mc_local_free(F, prod, s, conv))
                item(f"local characters at {s.to_json()}", left, right)
    except MidconvError as ex:
        report["symbolic_error"] = f"{ex.code}: {ex}"
    if explicit is not None and not prod.is_trivial():
        J = jacobi_sum(chi1, chi2)
        E1 = explicit.mc(chi1)
        for y in (ys or []):
            try:
                fl = lambda k: E1.to_cyclo(E1.mc_stalk_power_sum(chi2, y, k))
                fr = lambda k: explicit.to_cyclo(explicit.mc_stalk_power_sum(prod, y, k))
                dl = recover_dimension_from(fl)
                dr = recover_dimension_from(fr)
                item(f"oracle dimension at y = {y}", dl, dr)
                if dl == dr:
                    left = mc_charpoly(E1, chi2, y, d=dl)
                    right = mc_charpoly(explicit, prod, y, d=dr).twisted(-J)
                    item(f"oracle charpoly at y = {y}", left == right, True)
            except MidconvError as ex:
                report.setdefault("oracle_errors", []).append(f"{ex.code}: {ex}")
    report["agree"] = all(i["agree"] for i in report["items"]) and "symbolic_error" not in report
    return report
