import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from hesse_hg import cli
from hesse_hg.monodromy import M3, lam, monodromy_word
from hesse_hg.parameters import DEFAULT_PARAMS, dual

E = DEFAULT_PARAMS.exp()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out.out)


def as_matrix(rows):
    return np.array([[complex(*z) for z in row] for row in rows])


def test_eval_at_origin(capsys):
    code, doc = run_json(capsys, "eval", "--x", "0,0")
    assert code == 0
    assert doc["value"] == [1.0, 0.0]
    assert doc["schema"] == cli.SCHEMA and doc["command"] == "eval"


def test_eval_complex_point_and_derivative(capsys):
    code, doc = run_json(capsys, "eval", "--x", "0.1+0.01i,0.05", "--deriv", "1,0")
    assert code == 0
    assert doc["derivative"] == [1, 0]
    assert doc["x"][0] == [0.1, 0.01]


def test_outside_domain_exit_code(capsys):
    code, out = run(capsys, "eval", "--x", "0.5,0.5")
    assert code == cli.EXIT_DOMAIN
    assert json.loads(out.out)["error"] == "DomainError"
    assert "DomainError" in out.err


def test_resonant_parameters_exit_code(capsys):
    code, doc = run_json(capsys, "matrices", "--params", "a=1/7,1/3,1/5 b=1/7,3/7,1/11,5/11")
    assert code == cli.EXIT_PARAM
    assert doc["violations"]


def test_resonant_parameters_only_warn_for_series(capsys):
    code, doc = run_json(capsys, "eval", "--x", "0.1,0.05", "--params", "a=1/7,1/3,1/5 b=1/7,3/7,1/11,5/11")
    assert code == 0
    assert doc["warnings"]


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main(["eval"])
    assert info.value.code == cli.EXIT_USAGE


def test_matrices(capsys):
    code, doc = run_json(capsys, "matrices")
    assert code == 0
    assert np.allclose(as_matrix(doc["M3"]), M3(E).matrix, atol=1e-15)
    assert complex(*doc["lam"]) == pytest.approx(lam(E))
    assert doc["order"][:3] == ["00", "10", "20"]


def test_matrices_dual_and_word(capsys):
    _, doc = run_json(capsys, "matrices", "--dual")
    assert complex(*doc["lam"]) == pytest.approx(1 / lam(E))
    assert doc["evaluated_at"] == dual(DEFAULT_PARAMS).to_json()
    _, doc = run_json(capsys, "matrices", "--word", "3,2,3,-2")
    assert np.allclose(as_matrix(doc["matrix"]), monodromy_word([3, 2, 3, -2], E).matrix)


def test_bad_word(capsys):
    code, _ = run(capsys, "matrices", "--word", "4")
    assert code == cli.EXIT_ERROR


def test_params_from_json_file(tmp_path, capsys):
    params_file = tmp_path / "p.json"
    params_file.write_text(json.dumps(DEFAULT_PARAMS.to_json()))
    _, a = run_json(capsys, "intersect", "--params", f"@{params_file}")
    _, b = run_json(capsys, "intersect")
    assert a["values"] == b["values"]
    assert np.allclose([complex(*z) for z in a["ratios"]], [complex(*z) for z in a["h"]], atol=1e-12)


def test_csv_output(capsys):
    code, out = run(capsys, "eval", "--x", "0.1,0.05", "--csv")
    assert code == 0
    rows = dict(csv.reader(io.StringIO(out.out)))
    assert rows["key"] == "value"
    assert rows["command"] == "eval"
    assert float(rows["value[1]"]) == 0.0


def test_pde_check_and_rank(capsys):
    code, doc = run_json(capsys, "pde-check", "--N", "10")
    assert code == 0 and doc["status"] == "pass"
    code, doc = run_json(capsys, "rank")
    assert doc["rank"] == 9
    assert doc["initial_terms"] == [[0, 3], [1, 2], [3, 1], [5, 0]]


def test_verify_rank_suite(capsys, monkeypatch):
    monkeypatch.setenv("HESSE_HG_THREADS", "2")
    assert cli.threads() == 2
    code, doc = run_json(capsys, "verify", "rank")
    assert code == 0
    assert doc["status"] == "pass" and doc["rank"] == 9
    assert {c["status"] for c in doc["checks"]} == {"pass"}


def test_thread_setting_falls_back(monkeypatch):
    monkeypatch.setenv("HESSE_HG_THREADS", "many")
    assert cli.threads() == 1


def test_json_is_strict():
    text = cli.emit_json({"a": float("nan"), "b": 1 + 2j, "c": np.float64(0.5)})
    assert json.loads(text) == {"a": None, "b": [1.0, 2.0], "c": 0.5}


@pytest.mark.slow
def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hesse_hg", "intersect"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "intersect"
