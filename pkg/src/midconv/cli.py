"""Command line: midconv <command> [options].

Every report is one JSON object on stdout with a "conventions" header.  Exact
values are CycloNum objects {"N", "terms"}; floats appear only in fields
whose names start with "approx_" and are diagnostic.
"""

import argparse
import json
import sys

from . import __version__
from .charsum import gauss_pair_identity_check, gauss_sum, jacobi_sum
from .cyclo import is_signed_q_power, one
from .epsilon import EpsilonContext, det_h1c, det_mc, epsilon0_point, kernel_det
from .errors import MidconvError, SchemaError
from .field import MulChar, make_field, set_size_limit
from .localdata import Conventions, PointOrbit, kummer_scalar_at
from .mc import mc_rank, mc_sheaf, rigidity_index
from .serialize import (base_from_json, explicit_from_json, point_from_json, script_from_json,
                        sheaf_from_json, sheaf_to_json)


def _approx(z):
    if z is None:
        return None
    c = complex(z.approx())
    return [round(c.real, 12), round(c.imag, 12)]


def _exact(z, name, out):
    """Store z under name plus a labelled diagnostic approximation."""
    out[name] = None if z is None else z.to_json()
    out["approx_" + name] = _approx(z)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as ex:
        raise SchemaError(f"{path}: not valid JSON ({ex})") from ex


def _base_arg(text):
    if text is None:
        return None
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise SchemaError(f"--base expects p,m (got {text!r})") from None
    if len(parts) == 1:
        parts.append(1)
    return base_from_json({"p": parts[0], "m": parts[1]})


def _char(base, e):
    return MulChar(base, 1, e % (base.q - 1))


def _point(base, text):
    """A rational value 'a' or a coefficient list '[c0, c1, ..., 1]'."""
    val = json.loads(text)
    if isinstance(val, int):
        return PointOrbit.rational(base, val)
    return point_from_json(base, val)


def _conventions(args):
    return Conventions(args.eigenspace_weight, args.quotient_twist)


# commands

def cmd_charsum(args, conv):
    B = make_field(args.p, args.m)
    if args.chi_e is not None:
        chi = _char(B, args.chi_e)
    else:
        chi = MulChar.of_order(B, args.chi_order)
    out = {"field": B.info(), "chi": chi.to_json(), "order": chi.order()}
    g = gauss_sum(chi, args.workers)
    _exact(g, "gauss_sum", out)
    _exact(g * g, "gauss_sum_squared", out)
    if not chi.is_trivial():
        out["gauss_pair_identity"] = gauss_pair_identity_check(chi)
    if args.jacobi_with is not None:
        chi2 = _char(B, args.jacobi_with)
        out["jacobi_with"] = chi2.to_json()
        _exact(jacobi_sum(chi, chi2, args.workers), "jacobi_sum", out)
    return out


def cmd_eps(args, conv):
    F = sheaf_from_json(_load_json(args.input), _base_arg(args.base))
    s = _point(F.base, args.point)
    L = F.local(s)
    out = {"point": s.to_json(), "omega": args.omega}
    _exact(epsilon0_point(L, one(), F.base, args.omega), "epsilon0", out)
    if args.chi is not None and args.y is not None:
        chi = _char(F.base, args.chi)
        kappa = kummer_scalar_at(chi, s, args.y)
        _exact(kappa, "kummer_scalar", out)
        _exact(epsilon0_point(L, kappa, F.base, args.omega), "epsilon0_twisted", out)
    return out


def cmd_det(args, conv):
    F = sheaf_from_json(_load_json(args.input), _base_arg(args.base))
    chi = _char(F.base, args.chi)
    ctx = EpsilonContext(F.base, conv)
    out = {"chi": chi.to_json(), "y": args.y, "rank": F.rank,
           "d": F.rank * F.total_degree()}
    _exact(det_h1c(F, chi, args.y, ctx), "det_h1c", out)
    try:
        _exact(kernel_det(F, chi, args.y, ctx), "kernel_det", out)
        D = det_mc(F, chi, args.y, ctx)
        _exact(D, "det_mc", out)
        out["mc_rank"] = mc_rank(F, chi)
        sq = is_signed_q_power(D, F.base.q)
        out["signed_q_power"] = None if sq is None else {"sign": sq[0], "m": sq[1]}
    except MidconvError as ex:
        out["det_mc"] = None
        out["det_mc_error"] = ex.code
    return out


def cmd_mc(args, conv):
    F = sheaf_from_json(_load_json(args.input), _base_arg(args.base))
    chi = _char(F.base, args.chi)
    G = mc_sheaf(F, chi, conv, require_standard=not args.allow_nonstandard)
    data = sheaf_to_json(G)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=1)
            fh.write("\n")
    out = {"chi": chi.to_json(), "rank": G.rank, "rigidity_index": rigidity_index(G)}
    if not args.output:
        out["sheaf"] = data
    else:
        out["output"] = args.output
    return out


def cmd_oracle(args, conv):
    from .oracle import charpoly_from_traces, recover_dimension_from
    E = explicit_from_json(_load_json(args.sheaf), _base_arg(args.base))
    chi = _char(E.base, args.chi)
    y = args.y
    if args.kind == "h1c":
        fn = lambda k: E.to_cyclo(E.h1c_power_sum(chi, y, k, args.workers))
    elif args.kind == "mc":
        fn = lambda k: E.to_cyclo(E.mc_stalk_power_sum(chi, y, k, args.workers))
    else:
        fn = lambda k: E.to_cyclo(E.trace_vector(int(E.base.embed(y, k)), k))
    out = {"kind": args.kind, "chi": chi.to_json(), "y": y, "explicit": E.to_json()}
    _exact(fn(1), "trace", out)
    if args.charpoly:
        d = args.dim if args.dim is not None else recover_dimension_from(fn)
        cp = charpoly_from_traces(fn, d)
        out["dimension"] = d
        out["charpoly"] = [c.to_json() for c in cp.coefficients()]
        _exact(cp.det, "det", out)
    return out


def cmd_pipeline(args, conv):
    from .pipeline import run_pipeline, transcript
    base, start, steps, samples = script_from_json(_load_json(args.script), _base_arg(args.base))
    state = run_pipeline(base, steps, kummer=start, with_oracle=args.with_oracle, conv=conv,
                         samples=samples)
    tr = transcript(base, steps, state, conv, kummer=start)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(tr, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return tr


def cmd_rigidity(args, conv):
    if args.script:
        from .pipeline import run_pipeline
        base, start, steps, samples = script_from_json(_load_json(args.script), _base_arg(args.base))
        F = run_pipeline(base, steps, kummer=start, conv=conv).sheaf
    else:
        F = sheaf_from_json(_load_json(args.input), _base_arg(args.base))
    return {"rank": F.rank, "rigidity_index": rigidity_index(F),
            "points": [s.to_json() for s in F.points]}


def cmd_check(args, conv):
    from . import checks
    lines = []
    log = None if args.quiet else (lambda line: print(line, file=sys.stderr, flush=True))
    results = checks.run_all(workers=args.workers, log=log)
    for r in results:
        lines.append(r.to_json())
    return {"results": lines, "all_passed": all(r.passed for r in results)}


# parser

def build_parser():
    ap = argparse.ArgumentParser(prog="midconv", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--eigenspace-weight", choices=["0", "top"], default="0")
    ap.add_argument("--quotient-twist", type=int, choices=[0, 1], default=1)
    ap.add_argument("--size-limit", type=int, default=None, help="largest field enumerated")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charsum", help="Gauss and Jacobi sums")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--chi-order", type=int)
    g.add_argument("--chi-e", type=int)
    p.add_argument("--jacobi-with", type=int, help="exponent of a second character")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_charsum)

    p = sub.add_parser("eps", help="local epsilon constant at a singular point")
    p.add_argument("--input", required=True)
    p.add_argument("--point", required=True, help="rational value or JSON coefficient list")
    p.add_argument("--omega", choices=["dpi", "-dpi"], default="dpi")
    p.add_argument("--chi", type=int, help="twist by the Kummer scalar of chi at y")
    p.add_argument("--y", type=int)
    p.add_argument("--base")
    p.set_defaults(fn=cmd_eps)

    p = sub.add_parser("det", help="Frobenius determinants of H^1_c and of MC_chi")
    p.add_argument("--input", required=True)
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--base")
    p.set_defaults(fn=cmd_det)

    p = sub.add_parser("mc", help="middle convolution of symbolic data")
    p.add_argument("--input", required=True)
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--output")
    p.add_argument("--allow-nonstandard", action="store_true")
    p.add_argument("--base")
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("oracle", help="brute-force traces and characteristic polynomials")
    p.add_argument("--sheaf", required=True, help="explicit.json")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--kind", choices=["h1c", "mc", "stalk"], default="h1c")
    p.add_argument("--charpoly", action="store_true")
    p.add_argument("--dim", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--base")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("pipeline", help="run a convolution script")
    p.add_argument("--script", required=True)
    p.add_argument("--base")
    p.add_argument("--with-oracle", action="store_true")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("rigidity", help="rigidity index of a sheaf or of a script's result")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input")
    g.add_argument("--script")
    p.add_argument("--base")
    p.set_defaults(fn=cmd_rigidity)

    p = sub.add_parser("check", help="run the acceptance grids")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_check)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.size_limit:
        set_size_limit(args.size_limit)
    try:
        conv = _conventions(args)
        report = args.fn(args, conv)
    except SchemaError as ex:
        print(json.dumps({"error": ex.code, "message": str(ex)}, sort_keys=True), file=sys.stderr)
        return 2
    except MidconvError as ex:
        print(json.dumps({"error": ex.code, "message": str(ex)}, sort_keys=True), file=sys.stderr)
        return 1
    except (OSError, ValueError) as ex:
        print(json.dumps({"error": "input", "message": str(ex)}, sort_keys=True), file=sys.stderr)
        return 2
    report = {"command": args.command, "conventions": conv.to_json(), **report}
    json.dump(report, sys.stdout, sort_keys=True, indent=1)
    sys.stdout.write("\n")
    if args.command == "check" and not report["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
