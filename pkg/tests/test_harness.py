import json
import time

import numpy as np
import pytest

from circuitfam.circuits import Family
from circuitfam.classifiers import EvalResult
from circuitfam.features import read_dataset
from circuitfam.harness import (
    PRESETS,
    ResultsTable,
    SweepConfig,
    build_datasets,
    circuit_seed,
    dataset_path,
    emit_plot_data,
    peak_accuracy,
    run_sweep,
)
from circuitfam.measurement import Strategy
from circuitfam.rng import derive_seed


def smoke(out, **kw):
    cfg = dict(qubits=[4, 6], circuits=50, strategies=["z-only"], classifiers=["forest"], seed=7, out=str(out))
    cfg.update(kw)
    return SweepConfig(**cfg)


def row(n, mean, classifier="forest", strategy="z-only"):
    return EvalResult(strategy, classifier, n, [mean, mean])


def test_smoke_sweep_rows_runtime_and_determinism(tmp_path):
    t0 = time.perf_counter()
    table = run_sweep(smoke(tmp_path / "a"))
    assert time.perf_counter() - t0 < 300
    assert len(table) == 2
    run_sweep(smoke(tmp_path / "b"))
    a = (tmp_path / "a" / "results.csv").read_bytes()
    assert a == (tmp_path / "b" / "results.csv").read_bytes()
    header = a.decode().splitlines()[0]
    assert header == "strategy,classifier,n,splits," + ",".join(f"acc_{i}" for i in range(10)) + ",mean,std"
    X, y, names = read_dataset(dataset_path(tmp_path / "a", 4, "z-only"))
    assert X.shape == (150, 16)
    assert np.bincount(y).tolist() == [50, 50, 50]
    cfg = json.loads((tmp_path / "a" / "config.json").read_text())
    assert cfg["seed"] == 7 and cfg["qubits"] == [4, 6]


def test_resume_matches_uninterrupted_run(tmp_path):
    kw = dict(qubits=[3, 4], circuits=12, n_c=40, classifiers=["tree", "forest"], splits=3,
              strategies=["z-only", "nn"])
    full = run_sweep(smoke(tmp_path / "full", **kw))

    class Stop(Exception):
        pass

    seen = []

    def interrupt(r):
        seen.append(r)
        if len(seen) == 3:
            raise Stop

    with pytest.raises(Stop):
        run_sweep(smoke(tmp_path / "part", **kw), progress=interrupt)
    assert len(ResultsTable.load(tmp_path / "part" / "results.csv")) == 3
    resumed_keys = []
    run_sweep(smoke(tmp_path / "part", **kw), progress=lambda r: resumed_keys.append(ResultsTable.key(r)))
    assert len(resumed_keys) == len(full) - 3
    assert (tmp_path / "part" / "results.csv").read_bytes() == (tmp_path / "full" / "results.csv").read_bytes()


def test_force_recomputes_and_rerun_skips(tmp_path):
    cfg = smoke(tmp_path, qubits=[3], circuits=6, n_c=20, splits=2)
    run_sweep(cfg)
    calls = []
    run_sweep(cfg, progress=calls.append)
    assert calls == []
    run_sweep(cfg, force=True, progress=calls.append)
    assert len(calls) == 1


def test_parallel_build_matches_serial():
    cfg = SweepConfig(qubits=[3], circuits=4, n_c=30, seed=5, strategies=["z-only", "shadows"])
    serial = build_datasets(cfg, 3, [Strategy.Z_ONLY, Strategy.SHADOWS])
    cfg.workers = 2
    parallel = build_datasets(cfg, 3, [Strategy.Z_ONLY, Strategy.SHADOWS])
    for s in serial:
        assert np.array_equal(serial[s][0], parallel[s][0])
        assert np.array_equal(serial[s][1], parallel[s][1])


def test_circuit_seed_derivation():
    assert circuit_seed(3, Family.IQP, 5, 7) == derive_seed(3, 0, 5, 7)
    assert circuit_seed(3, Family.CLIFFORD, 5, 7) != circuit_seed(3, Family.IQP, 5, 7)


def test_config_validation_and_io(tmp_path):
    with pytest.raises(ValueError):
        SweepConfig(qubits=[]).validate()
    with pytest.raises(ValueError):
        SweepConfig(families=["IQP"]).validate()
    with pytest.raises(ValueError):
        SweepConfig(circuits=0).validate()
    with pytest.raises(ValueError):
        SweepConfig(strategies=["bogus"]).validate()
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"qbits": [4]})
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"qubits": [4, 5], "circuits": 300, "seed": 2024}))
    cfg = SweepConfig.load(path)
    assert cfg.qubits == [4, 5] and cfg.circuits == 300 and cfg.lam == 16
    assert SweepConfig.from_dict(cfg.to_dict()) == cfg
    assert PRESETS["desk"]["circuits"] == 300


def test_default_config_matches_parameter_table():
    cfg = SweepConfig()
    assert cfg.qubits == list(range(4, 21))
    assert (cfg.lam, cfg.circuits, cfg.n_c, cfg.splits) == (16, 1000, 1000, 10)
    assert cfg.strategies == ["z-only", "nn", "multi-basis", "shadows"]
    assert cfg.classifiers == ["logistic", "tree", "forest", "svm"]


def test_default_out_from_environment(monkeypatch):
    monkeypatch.setenv("CIRCUITFAM_OUT", "/tmp/somewhere")
    assert SweepConfig().out == "/tmp/somewhere"


def test_results_table_overwrites_and_round_trips(tmp_path):
    t = ResultsTable([row(4, 0.5), row(6, 0.6)])
    t.put(row(4, 0.7))
    assert len(t) == 2 and t.get("ZOnly", "rf", 4).mean == 0.7
    t.save(tmp_path / "r.csv")
    back = ResultsTable.load(tmp_path / "r.csv")
    assert back.to_csv() == t.to_csv()


def test_peak_accuracy():
    assert peak_accuracy(ResultsTable([row(4, 0.91), row(6, 0.88)]), "z-only", "forest") == (4, 0.91)
    assert peak_accuracy(ResultsTable([row(6, 0.4)]), "z-only", "forest") == (6, 0.4)
    assert peak_accuracy(ResultsTable([row(8, 0.9), row(4, 0.9)]), "z-only", "forest") == (4, 0.9)
    with pytest.raises(ValueError):
        peak_accuracy(ResultsTable([row(4, 0.9)]), "shadows", "forest")


def test_plot_data():
    rows = [row(n, 0.1 * n, c) for c in ("tree", "forest") for n in (8, 4, 6)]
    rows[0].accuracies = [0.25, 0.75]
    t = ResultsTable(rows + [row(4, 0.3, "tree", "nn")])
    lines = emit_plot_data(t, "z-only").splitlines()
    assert lines[0] == "n,classifier,mean,std"
    assert len(lines) == 7
    assert [ln.split(",")[:2] for ln in lines[1:]] == [
        ["4", "forest"], ["6", "forest"], ["8", "forest"], ["4", "tree"], ["6", "tree"], ["8", "tree"]]
    tree8 = [ln for ln in lines if ln.startswith("8,tree")][0]
    assert tree8.split(",")[3] == repr(rows[0].std)
    assert emit_plot_data(t, "shadows") == "n,classifier,mean,std\n"
