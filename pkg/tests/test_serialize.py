import json

import pytest

from midconv import MulChar, PointOrbit, kummer_sheaf, make_field
from midconv.errors import SchemaError
from midconv.mc import mc_sheaf
from midconv.serialize import (explicit_from_json, script_from_json, sheaf_from_json, sheaf_to_json,
                               steps_from_json)


def _sample(B):
    fac = [(PointOrbit.rational(B, 0), MulChar(B, 1, 3)), (PointOrbit(B, (1, 0, 1)), MulChar(B, 1, 2))]
    return kummer_sheaf(B, fac)


def test_sheaf_roundtrip(F7):
    F = _sample(F7)
    G = mc_sheaf(F, MulChar(F7, 1, -7 % 6), require_standard=False)
    for X in (F, G):
        data = json.loads(json.dumps(sheaf_to_json(X)))
        Y = sheaf_from_json(data)
        assert Y == X
        assert sheaf_to_json(Y) == sheaf_to_json(X)
        for y in (2, 3):
            assert Y.stalk_det(y) == X.stalk_det(y)


def test_kummer_shorthand(F7):
    obj = {"base": {"p": 7, "m": 1},
           "kummer": [{"point": [0, 1], "chi_e": 3}, {"point": [1, 0, 1], "chi_e": 2}]}
    assert sheaf_to_json(sheaf_from_json(obj)) == sheaf_to_json(_sample(F7))


def test_base_can_come_from_caller(F7):
    obj = {"kummer": [{"point": [0, 1], "chi_e": 3}]}
    assert sheaf_from_json(obj, F7).rank == 1
    with pytest.raises(SchemaError):
        sheaf_from_json(obj)


@pytest.mark.parametrize("bad", [
    [],
    {"base": {"p": 8, "m": 1}, "kummer": []},
    {"base": {"p": 7, "m": 1}, "kummer": [{"point": [0, 2], "chi_e": 1}]},
    {"base": {"p": 7, "m": 1}, "kummer": [{"point": [6, 0, 1], "chi_e": 1}]},
    {"base": {"p": 7, "m": 1}, "kummer": [{"point": [9, 1], "chi_e": 1}]},
    {"base": {"p": 7, "m": 1}, "kummer": [{"point": [0, 1], "chi_e": "x"}]},
    {"base": {"p": 7, "m": 1}, "rank": 1, "singular": [], "infinity": []},
    {"base": {"p": 7, "m": 1}, "rank": 1, "singular": [],
     "infinity": [{"n": 1, "l": 1, "chi_e": 0, "alpha": {"N": 1, "terms": [[0, 0, 1]]}}]},
])
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        sheaf_from_json(bad)


def test_steps_and_script(F7):
    steps = steps_from_json(F7, [{"op": "MT", "chi_e": 3, "point": [0, 1]}, {"op": "MC", "chi_e": 3}])
    assert [s.op for s in steps] == ["MT", "MC"]
    with pytest.raises(SchemaError):
        steps_from_json(F7, [{"op": "MC", "chi_e": 0}])
    with pytest.raises(SchemaError):
        steps_from_json(F7, [{"op": "MT", "chi_e": 1}])
    with pytest.raises(SchemaError):
        steps_from_json(F7, [{"op": "XX", "chi_e": 1}])
    base, start, steps, samples = script_from_json(
        {"base": {"p": 5, "m": 1}, "steps": [{"op": "MC", "chi_e": 2}], "samples": [1, 2]})
    assert base.q == 5 and start == [] and samples == [1, 2]
    with pytest.raises(SchemaError):
        script_from_json({"steps": []})
    with pytest.raises(SchemaError):
        script_from_json({"base": {"p": 5, "m": 1}, "steps": [], "samples": "all"})


def test_explicit_with_history(F7):
    E = explicit_from_json({"base": {"p": 7, "m": 1}, "factors": [{"point": [0, 1], "chi_e": 3}],
                            "history": [{"op": "MC", "chi_e": 3}]})
    assert E.to_json()["history"]
