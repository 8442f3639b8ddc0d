"""JSON forms of symbolic sheaves, explicit sheaves and pipeline scripts.

sheaf.json (full form, as written by `sheaf_to_json`):

    {"base": {"p": 5, "m": 1}, "rank": 2,
     "singular": [{"point": [0, 1], "blocks": [BLOCK, ...]}, ...],
     "infinity": [BLOCK, ...],
     "stalk_det_hint": {"2": CYCLO, ...},
     "det_sheaf": {"c": CYCLO | null, "nus": [{"point": [...], "chi_e": e}]} | null}

    BLOCK = {"n": 1, "l": 1, "chi_e": e, "mult": 1, "alpha": CYCLO | null}
    CYCLO = {"N": N, "terms": [[exponent, num, den], ...]}

A block character lives on F_{q^(deg(s) l)}; chi_e is its exponent there.
A sheaf may also be given as {"base": ..., "kummer": [{"point": [...], "chi_e": e}]}.
"""

from .cyclo import CycloNum
from .errors import MidconvError, SchemaError
from .field import MulChar, make_field
from .localdata import DetSheaf, LocalData, PointOrbit, SheafData, TameBlock, kummer_sheaf


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing '{key}'")
    val = obj[key]
    if kind is int:
        ok = isinstance(val, int) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind)
    if not ok:
        raise SchemaError(f"{where}: '{key}' must be {getattr(kind, '__name__', kind)}")
    return val


def _wrap(fn, where):
    try:
        return fn()
    except SchemaError:
        raise
    except (MidconvError, ValueError, TypeError, KeyError, IndexError) as ex:
        raise SchemaError(f"{where}: {ex}") from ex


# pieces

def cyclo_to_json(z):
    return None if z is None else z.to_json()


def cyclo_from_json(obj, where="value"):
    if obj is None:
        return None
    _need(obj, "N", int, where)
    _need(obj, "terms", list, where)
    return _wrap(lambda: CycloNum.from_json(obj), where)


def base_to_json(base):
    return {"p": base.p, "m": base.m}


def base_from_json(obj, where="base"):
    p = _need(obj, "p", int, where)
    m = _need(obj, "m", int, where)
    return _wrap(lambda: make_field(p, m), where)


def point_from_json(base, obj, where="point"):
    if not isinstance(obj, list) or not all(isinstance(c, int) for c in obj):
        raise SchemaError(f"{where}: a point is a list of coefficient codes")
    if any(c < 0 or c >= base.q for c in obj):
        raise SchemaError(f"{where}: coefficients must be codes in 0..q-1")
    return _wrap(lambda: PointOrbit(base, tuple(obj)).validate(), where)


def _char(base, level, e, where):
    if level == 1:
        return _wrap(lambda: MulChar(base, 1, e % (base.q - 1)), where)
    return _wrap(lambda: MulChar(base, level, e % (base.q ** level - 1)), where)


def block_from_json(base, degree, obj, where="block"):
    n = _need(obj, "n", int, where)
    l = _need(obj, "l", int, where)
    e = _need(obj, "chi_e", int, where)
    mult = obj.get("mult", 1)
    if not isinstance(mult, int):
        raise SchemaError(f"{where}: 'mult' must be int")
    alpha = cyclo_from_json(obj.get("alpha"), where + ".alpha")
    chi = _char(base, degree * l, e, where)
    return _wrap(lambda: TameBlock(n, l, chi, alpha, mult), where)


def factors_from_json(base, items, where="factors"):
    if not isinstance(items, list):
        raise SchemaError(f"{where}: expected a list")
    out = []
    for i, item in enumerate(items):
        w = f"{where}[{i}]"
        s = point_from_json(base, _need(item, "point", list, w), w)
        e = _need(item, "chi_e", int, w)
        out.append((s, _char(base, 1, e, w)))
    return out


def factors_to_json(factors):
    return [{"point": s.to_json(), "chi_e": eta.e} for s, eta in factors]


# sheaves

def sheaf_to_json(F):
    ds = F.det_sheaf
    return {
        "base": base_to_json(F.base),
        "rank": F.rank,
        "singular": [{"point": s.to_json(), "blocks": [b.to_json() for b in L.blocks]}
                     for s, L in F.singular],
        "infinity": [b.to_json() for b in F.infinity.blocks],
        "stalk_det_hint": {str(y): cyclo_to_json(v) for y, v in sorted(F.stalk_det_hint.items())
                           if v is not None},
        "det_sheaf": None if ds is None else {"c": cyclo_to_json(ds.c),
                                              "nus": factors_to_json(ds.nus)},
    }


def sheaf_from_json(obj, base=None):
    if not isinstance(obj, dict):
        raise SchemaError("sheaf: expected an object")
    if "base" in obj:
        base = base_from_json(obj["base"])
    elif base is None:
        raise SchemaError("sheaf: missing 'base'")
    if "kummer" in obj:
        fac = factors_from_json(base, obj["kummer"], "kummer")
        return _wrap(lambda: kummer_sheaf(base, fac), "kummer")
    rank = _need(obj, "rank", int, "sheaf")
    sing = []
    for i, item in enumerate(_need(obj, "singular", list, "sheaf")):
        w = f"singular[{i}]"
        s = point_from_json(base, _need(item, "point", list, w), w)
        blocks = [block_from_json(base, s.degree, b, f"{w}.blocks[{j}]")
                  for j, b in enumerate(_need(item, "blocks", list, w))]
        sing.append((s, LocalData(tuple(blocks), s.degree)))
    inf = [block_from_json(base, 1, b, f"infinity[{j}]")
           for j, b in enumerate(_need(obj, "infinity", list, "sheaf"))]
    hints = {}
    for k, v in obj.get("stalk_det_hint", {}).items():
        try:
            y = int(k)
        except ValueError:
            raise SchemaError(f"stalk_det_hint: bad key {k!r}") from None
        hints[y] = cyclo_from_json(v, f"stalk_det_hint[{k}]")
    ds = obj.get("det_sheaf")
    if ds is not None:
        ds = DetSheaf(cyclo_from_json(ds.get("c"), "det_sheaf.c"),
                      tuple(factors_from_json(base, ds.get("nus", []), "det_sheaf.nus")))
    return _wrap(lambda: SheafData(base, tuple(sing), LocalData(tuple(inf), 1), rank, hints, ds),
                 "sheaf")


# explicit sheaves and scripts

def explicit_from_json(obj, base=None):
    from .oracle import ExplicitSheaf
    if not isinstance(obj, dict):
        raise SchemaError("explicit: expected an object")
    if "base" in obj:
        base = base_from_json(obj["base"])
    elif base is None:
        raise SchemaError("explicit: missing 'base'")
    E = ExplicitSheaf(base, factors_from_json(base, _need(obj, "factors", list, "explicit")))
    for step in steps_from_json(base, obj.get("history", []), "history"):
        E = E.mt(step.chi, step.point) if step.op == "MT" else E.mc(step.chi)
    return E


def steps_from_json(base, items, where="steps"):
    from .pipeline import PipelineStep
    if not isinstance(items, list):
        raise SchemaError(f"{where}: expected a list")
    out = []
    for i, item in enumerate(items):
        w = f"{where}[{i}]"
        op = _need(item, "op", str, w)
        chi = _char(base, 1, _need(item, "chi_e", int, w), w)
        if op == "MT":
            pt = point_from_json(base, _need(item, "point", list, w), w)
            out.append(PipelineStep.MT(chi, pt))
        elif op == "MC":
            if chi.is_trivial():
                raise SchemaError(f"{w}: MC needs a nontrivial character")
            out.append(PipelineStep.MC(chi))
        else:
            raise SchemaError(f"{w}: op must be MT or MC")
    return out


def script_from_json(obj, base=None):
    """steps.json: {"base"?, "start"?: [factors], "steps": [...], "samples"?: [y, ...]}."""
    if not isinstance(obj, dict):
        raise SchemaError("script: expected an object")
    if "base" in obj:
        base = base_from_json(obj["base"])
    elif base is None:
        raise SchemaError("script: missing 'base' (or pass --base)")
    start = factors_from_json(base, obj.get("start", []), "start")
    steps = steps_from_json(base, _need(obj, "steps", list, "script"))
    samples = obj.get("samples")
    if samples is not None and not (isinstance(samples, list) and all(isinstance(y, int) for y in samples)):
        raise SchemaError("samples: expected a list of integers")
    return base, start, steps, samples
