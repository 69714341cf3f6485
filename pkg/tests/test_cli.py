import json
import os

import pytest

from floerkit.cli import main
from floerkit.swf import HomologyModule, catalog_complex, complex_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_floer_catalog(capsys):
    code, rep, _ = run(capsys, "floer", "--catalog", "Sigma_2_3_11")
    assert code == 0
    inv = rep["invariants"]
    assert (inv["alpha"], inv["beta"], inv["gamma"]) == (2, 0, 0)
    assert (inv["a"], inv["b"], inv["c"]) == (4, 1, 2)
    assert rep["tate"]["passed"] and rep["seed"] == 0


def test_floer_s1(capsys):
    code, rep, _ = run(capsys, "floer", "--catalog", "Sigma_2_3_11", "--flavor", "S1", "--field", "3")
    assert code == 0 and rep["invariants"]["d"] == 2 and rep["invariants"]["h"] == -1


def test_tensor_catalog(capsys):
    code, rep, _ = run(capsys, "tensor", "--catalog", "Sigma_2_3_11")
    assert code == 0
    inv = rep["invariants"]
    assert (inv["alpha"], inv["beta"], inv["gamma"]) == (2, 2, 0)
    assert rep["additivity_defect"] == {"alpha": -2, "beta": 2, "gamma": 0}


def test_dual_and_certify(capsys):
    code, rep, _ = run(capsys, "dual", "--catalog", "Sigma_2_3_11")
    inv = rep["invariants"]
    assert code == 0 and (inv["alpha"], inv["beta"], inv["gamma"]) == (0, 0, -2)
    code, rep, _ = run(capsys, "certify", "--catalog", "Sigma_2_3_11")
    assert code == 0 and rep["certificate"]["consistent"]


def test_conley_saddle(capsys, tmp_path):
    plot = tmp_path / "cells.csv"
    code, rep, _ = run(capsys, "conley", "--catalog", "saddle_2d", "--resolution", "16", "--plot", str(plot))
    assert code == 0
    assert rep["homology"]["ranks"] == {"1": 1}
    lines = plot.read_text().splitlines()
    assert lines[0] == "x1,x2,role" and len(lines) > 1


def test_morse_and_compare(capsys):
    code, rep, _ = run(capsys, "morse", "--catalog", "double_well")
    assert code == 0 and rep["d_squared"]["passed"]
    code, rep, _ = run(capsys, "compare", "--morse-catalog", "double_well", "--catalog", "double_well_1d")
    assert code == 0 and rep["match"] and rep["morse"] == rep["conley"]


def test_lattice_sweep_and_furuta(capsys):
    code, rep, _ = run(capsys, "lattice", "--sweep", "--b2", "22", "--sigma", "-16")
    assert code == 0
    assert rep["allowed_J"] == ["0", "-E8"]
    assert rep["furuta"]["verdict"] == "satisfied"
    code, rep, _ = run(capsys, "lattice", "--block=-E8", "--block=-E8")
    assert code == 0 and rep["froyshov"]["verdict"] == "excluded"


def test_smith(capsys):
    code, rep, _ = run(capsys, "smith", "--catalog", "saddle_2d", "--resolution", "16", "--action=-1,2")
    assert code == 0 and rep["verdict"] == "satisfied"
    code, rep, _ = run(capsys, "smith", "--catalog", "double_well_1d")
    assert code == 0 and (rep["total_dimension"], rep["fixed_dimension"]) == (1, 1)


def test_error_object(capsys, tmp_path):
    code, rep, _ = run(capsys, "floer", str(tmp_path / "missing.json"))
    assert code == 1 and rep["error"]["code"] == "schema_error"
    code, rep, _ = run(capsys, "floer", "--catalog", "Sigma_2_3_11", "--window", "10", "12")
    assert code == 1 and set(rep["error"]) == {"code", "message", "witness"}
    code, rep, _ = run(capsys, "smith", "--catalog", "saddle_2d", "--resolution", "16")
    assert code == 1 and rep["error"]["code"] == "schema_error"


def test_unknown_fields_rejected_unless_allowed(capsys, tmp_path):
    obj = catalog_complex("S3").to_json()
    obj["colour"] = "red"
    path = tmp_path / "c.json"
    path.write_text(json.dumps(obj))
    code, rep, _ = run(capsys, "floer", str(path))
    assert code == 1 and rep["error"]["code"] == "schema_error"
    code, rep, _ = run(capsys, "floer", str(path), "--allow-unknown")
    assert code == 0


def test_byte_identical(capsys):
    _, _, a = run(capsys, "tensor", "--catalog", "Sigma_2_3_11", "--seed", "7")
    _, _, b = run(capsys, "tensor", "--catalog", "Sigma_2_3_11", "--seed", "7")
    assert a == b and json.loads(a)["seed"] == 7


def test_out_is_written_atomically(capsys, tmp_path):
    out = tmp_path / "rep.json"
    assert main(["lattice", "--m", "2", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["froyshov"]["verdict"] == "allowed"
    assert sorted(os.listdir(tmp_path)) == ["rep.json"]


def test_reports_reingest(capsys, tmp_path):
    _, rep, text = run(capsys, "dual", "--catalog", "Sigma_2_3_11")
    # the homology table and the complex both read back unchanged
    assert HomologyModule.from_json(rep["homology"]).to_json() == rep["homology"]
    c = complex_from_json(rep["complex"])
    assert c.to_json() == rep["complex"]
    path = tmp_path / "dual.json"
    path.write_text(json.dumps(rep["complex"]))
    _, again, _ = run(capsys, "floer", str(path))
    assert again["invariants"] == rep["invariants"]
    assert again["homology"] == rep["homology"]


def test_flow_file_roundtrip(capsys, tmp_path):
    from floerkit.conley import catalog_flow, flow_to_json

    path = tmp_path / "flow.json"
    path.write_text(json.dumps(flow_to_json(catalog_flow("max_2d", 8))))
    _, a, _ = run(capsys, "conley", str(path))
    _, b, _ = run(capsys, "conley", "--catalog", "max_2d", "--resolution", "8")
    assert a["homology"] == b["homology"] == {"field": 0, "ranks": {"2": 1}, "torsion": {}}


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])


def test_morse_rejects_non_compact(capsys):
    code, rep, _ = run(capsys, "morse", "--catalog", "non_compact")
    assert code == 1 and rep["error"]["code"] == "d_squared_nonzero"
    assert rep["error"]["witness"][0]["x"] == "x" and rep["error"]["witness"][0]["z"] == "z"
