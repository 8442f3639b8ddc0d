import json

import pytest

from midconv.cli import main
from midconv.cyclo import CycloNum

KUMMER = {"base": {"p": 7, "m": 1},
          "kummer": [{"point": [0, 1], "chi_e": 3}, {"point": [6, 1], "chi_e": 2}]}
LEGENDRE = {"base": {"p": 7, "m": 1}, "samples": [2, 3, 4],
            "steps": [{"op": "MT", "chi_e": 3, "point": [0, 1]},
                      {"op": "MT", "chi_e": 3, "point": [6, 1]},
                      {"op": "MC", "chi_e": 3}]}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in [("kummer", KUMMER), ("legendre", LEGENDRE),
                      ("explicit", {"base": KUMMER["base"], "factors": KUMMER["kummer"]})]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, (json.loads(cap.out) if cap.out.strip() else None), cap.err


def test_charsum(capsys):
    code, rep, _ = run(capsys, "charsum", "--p", "7", "--chi-order", "3", "--jacobi-with", "2")
    assert code == 0
    assert rep["conventions"] == {"eigenspace_weight": "0", "quotient_twist": 1}
    assert rep["gauss_pair_identity"] is True
    g = CycloNum.from_json(rep["gauss_sum"])
    assert g * g.conj() == CycloNum.from_rational(7)
    assert len(rep["approx_gauss_sum"]) == 2


def test_det_agrees_with_oracle(capsys, files):
    code, det, _ = run(capsys, "det", "--input", files["kummer"], "--chi", "1", "--y", "3")
    assert code == 0 and det["mc_rank"] == 1
    code, orc, _ = run(capsys, "oracle", "--sheaf", files["explicit"], "--chi", "1", "--y", "3",
                       "--kind", "mc", "--charpoly")
    assert code == 0 and orc["dimension"] == 1
    assert CycloNum.from_json(det["det_mc"]) == CycloNum.from_json(orc["det"])


def test_eps(capsys, files):
    code, rep, _ = run(capsys, "eps", "--input", files["kummer"], "--point", "0", "--chi", "1", "--y", "3")
    assert code == 0
    assert rep["epsilon0"] and rep["epsilon0_twisted"] and rep["kummer_scalar"]


def test_mc_writes_output(capsys, files):
    out = str(files["dir"] / "mc.json")
    code, rep, _ = run(capsys, "mc", "--input", files["kummer"], "--chi", "1", "--output", out)
    assert code == 0 and rep["rank"] == 1
    code, rig, _ = run(capsys, "rigidity", "--input", out)
    assert code == 0 and rig["rigidity_index"] == rep["rigidity_index"] == 2


def test_pipeline_and_rigidity(capsys, files):
    code, tr, _ = run(capsys, "pipeline", "--script", files["legendre"], "--with-oracle")
    assert code == 0
    assert tr["final"]["rank"] == 2 and tr["rigidity_index"] == 2
    assert all(e["checks"] for e in tr["log"])
    code, rig, _ = run(capsys, "rigidity", "--script", files["legendre"])
    assert rig["rank"] == 2


def test_conventions_header(capsys, files):
    code, rep, _ = run(capsys, "--eigenspace-weight", "top", "--quotient-twist", "0",
                       "det", "--input", files["kummer"], "--chi", "1", "--y", "3")
    assert code == 0
    assert rep["conventions"] == {"eigenspace_weight": "top", "quotient_twist": 0}


def test_error_codes(capsys, files):
    bad = files["dir"] / "bad.json"
    bad.write_text('{"p": 1}')
    code, rep, err = run(capsys, "mc", "--input", str(bad), "--chi", "1")
    assert code == 2 and json.loads(err)["error"] == "schema_error"
    bad.write_text("not json")
    code, _, err = run(capsys, "rigidity", "--input", str(bad))
    assert code == 2
    code, _, err = run(capsys, "mc", "--input", files["kummer"], "--chi", "2")
    assert code == 1 and json.loads(err)["error"] == "not_standard"
    code, _, err = run(capsys, "det", "--input", files["kummer"], "--chi", "1", "--y", "0")
    assert code == 1 and json.loads(err)["error"] == "point_in_s"
