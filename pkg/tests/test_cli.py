import json
import subprocess
import sys

import pytest

from circuitfam.circuits import parse_circuit
from circuitfam.cli import main


def test_generate_iqp_empty_interior(tmp_path, capsys):
    assert main(["generate", "--family", "iqp", "--qubits", "4", "--gates", "0", "--circuits", "1", "--seed", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    c = parse_circuit(lines[0])
    assert len(c.gates) == 8


def test_pipeline_generate_measure_featurize_train(tmp_path, capsys):
    circuits = tmp_path / "c.jsonl"
    for fam in ("iqp", "clifford", "clifford-t"):
        out = tmp_path / f"{fam}.jsonl"
        assert main(["generate", "--family", fam, "--qubits", "3", "--gates", "60", "--circuits", "6",
                     "--seed", "1", "--out", str(out)]) == 0
        with open(circuits, "a") as fh:
            fh.write(out.read_text())
    meas = tmp_path / "m.jsonl"
    assert main(["measure", "--circuits", str(circuits), "--strategy", "z-only", "--seed", "2", "--out", str(meas)]) == 0
    data = tmp_path / "d.csv"
    assert main(["featurize", "--measurements", str(meas), "--out", str(data)]) == 0
    rows = data.read_text().splitlines()
    assert len(rows) == 19 and rows[0].startswith("label,h0")
    capsys.readouterr()
    assert main(["train", "--dataset", str(data), "--classifier", "tree,forest", "--splits", "2", "--seed", "3"]) == 0
    out = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["classifier"] for r in out] == ["tree", "forest"]
    assert all(len(r["accuracies"]) == 2 for r in out)


def test_sweep_creates_results(tmp_path, capsys):
    out = tmp_path / "demo"
    code = main(["sweep", "--qubits", "4,6", "--circuits", "50", "--strategies", "z-only",
                 "--classifiers", "forest", "--seed", "7", "--out", str(out)])
    assert code == 0
    assert (out / "results.csv").read_text().count("\n") == 3
    capsys.readouterr()
    assert main(["plot-data", "--results", str(out / "results.csv"), "--strategy", "z-only"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "n,classifier,mean,std"


def test_sweep_from_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"qubits": [3], "circuits": 5, "n_c": 20, "strategies": ["nn"],
                               "classifiers": ["tree"], "splits": 2, "seed": 4, "out": str(tmp_path / "o")}))
    assert main(["sweep", "--config", str(cfg)]) == 0
    assert (tmp_path / "o" / "dataset_n3_nn.csv").exists()


def test_theory_variance_prints_one_json_object(capsys):
    assert main(["theory", "variance", "--n", "2", "--shots", "100000", "--seed", "1"]) == 0
    out = capsys.readouterr().out.strip()
    assert "\n" not in out
    rep = json.loads(out)
    assert rep["shots"] == 100000
    assert {"exact_zz", "var_z_theory", "var_s_theory", "var_z", "var_s", "ratio_theory"} <= set(rep)


@pytest.mark.parametrize("argv,rows", [
    (["theory", "decay", "--trials", "20", "--gates", "10"], 4),
    (["theory", "bridge", "--trials", "20"], 4),
    (["theory", "iqp-frame", "--circuits", "3", "--gates", "50"], 3),
])
def test_theory_csv_commands(argv, rows, capsys):
    assert main(argv + ["--seed", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "check,point,empirical,se,theory,pass"
    assert len(lines) == rows + 1


def test_unknown_flag_exits_1(capsys):
    assert main(["sweep", "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_seed_exits_1(capsys):
    assert main(["generate", "--family", "iqp", "--qubits", "4"]) == 1
    assert main(["sweep", "--qubits", "4"]) == 1


def test_validation_errors_exit_1(capsys):
    assert main(["generate", "--family", "qaoa", "--qubits", "4", "--seed", "1"]) == 1
    assert main(["sweep", "--qubits", "1", "--seed", "1", "--out", "unused"]) == 1
    assert "error" in capsys.readouterr().err


def test_io_errors_exit_2(tmp_path, capsys):
    assert main(["measure", "--circuits", str(tmp_path / "missing.jsonl"), "--strategy", "nn", "--seed", "1"]) == 2
    assert main(["generate", "--family", "iqp", "--qubits", "3", "--seed", "1",
                 "--out", str(tmp_path / "no" / "such" / "dir.jsonl")]) == 2
    assert str(tmp_path / "missing.jsonl") in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "circuitfam", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "sweep" in res.stdout
