"""Sweep orchestration: generate -> simulate -> measure -> featurize -> evaluate."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .circuits import Family, generate_circuit, parse_family
from .classifiers import CLASSIFIERS, EvalResult, evaluate, parse_classifier
from .features import feature_dim, featurize, read_dataset, write_dataset
from .measurement import Strategy, measure, parse_strategy
from .rng import derive_seed
from .simulator import run

log = logging.getLogger(__name__)

OUT_ENV = "CIRCUITFAM_OUT"
RESULTS_FILE = "results.csv"
STRATEGY_ORDER = (Strategy.Z_ONLY, Strategy.NN, Strategy.MULTI_BASIS, Strategy.SHADOWS)


def default_out():
    return os.environ.get(OUT_ENV, "runs")


@dataclass
class SweepConfig:
    families: list = field(default_factory=lambda: [f.value for f in (Family.IQP, Family.CLIFFORD, Family.CLIFFORD_T)])
    qubits: list = field(default_factory=lambda: list(range(4, 21)))
    lam: int = 16
    circuits: int = 1000
    n_c: int = 1000
    strategies: list = field(default_factory=lambda: [s.slug for s in STRATEGY_ORDER])
    classifiers: list = field(default_factory=lambda: list(CLASSIFIERS))
    splits: int = 10
    train_frac: float = 0.8
    seed: int = 0
    out: str = field(default_factory=default_out)
    workers: int = 1

    def validate(self):
        fams = [parse_family(f) for f in self.families]
        strats = [parse_strategy(s) for s in self.strategies]
        clfs = [parse_classifier(c) for c in self.classifiers]
        if not fams or not strats or not clfs or not self.qubits:
            raise ValueError("families, qubits, strategies and classifiers must be nonempty")
        if len(set(fams)) < 2:
            raise ValueError("need at least two distinct families to classify")
        if min(self.qubits) < 2:
            raise ValueError("qubit counts must be at least 2")
        for name in ("lam", "circuits", "splits", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.n_c < 0:
            raise ValueError("n_c must be non-negative")
        if self.circuits < 2:
            raise ValueError("need at least 2 circuits per family")
        if not 0.0 < self.train_frac < 1.0:
            raise ValueError("train_frac must lie in (0, 1)")
        return fams, strats, clfs

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return asdict(self)


PRESETS = {
    # laptop-scale run reproducing the strategy comparison in minutes
    "desk": dict(qubits=[4, 5, 6, 8], circuits=300),
    "smoke": dict(qubits=[4, 6], circuits=50, strategies=["z-only"], classifiers=["forest"]),
    "full": dict(qubits=list(range(4, 21)), circuits=1000),
}


# --- results table --------------------------------------------------------


class ResultsTable:
    """EvalResults keyed by (strategy slug, classifier, n)."""

    def __init__(self, rows=None):
        self.rows: dict = {}
        for r in rows or ():
            self.put(r)

    @staticmethod
    def key(r: EvalResult):
        return (parse_strategy(r.strategy).slug, r.classifier, int(r.n))

    def put(self, r: EvalResult):
        r.strategy = parse_strategy(r.strategy).slug
        self.rows[self.key(r)] = r

    def __contains__(self, key):
        return key in self.rows

    def __len__(self):
        return len(self.rows)

    def get(self, strategy, classifier, n):
        return self.rows[(parse_strategy(strategy).slug, parse_classifier(classifier), int(n))]

    def select(self, strategy=None, classifier=None):
        out = []
        for (s, c, n), r in sorted(self.rows.items(), key=lambda kv: _sort_key(kv[0])):
            if strategy is not None and s != parse_strategy(strategy).slug:
                continue
            if classifier is not None and c != parse_classifier(classifier):
                continue
            out.append(r)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        k = max((len(r.accuracies) for r in self.rows.values()), default=0)
        w.writerow(["strategy", "classifier", "n", "splits"] + [f"acc_{i}" for i in range(k)] + ["mean", "std"])
        for r in self.select():
            accs = [repr(a) for a in r.accuracies] + [""] * (k - len(r.accuracies))
            w.writerow([r.strategy, r.classifier, r.n, len(r.accuracies)] + accs + [repr(r.mean), repr(r.std)])
        return buf.getvalue()

    def save(self, path):
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(self.to_csv())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path):
        table = cls()
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                k = int(row["splits"])
                accs = [float(row[f"acc_{i}"]) for i in range(k)]
                table.put(EvalResult(row["strategy"], row["classifier"], int(row["n"]), accs))
        return table


def _sort_key(key):
    s, c, n = key
    return (STRATEGY_ORDER.index(parse_strategy(s)), CLASSIFIERS.index(c), n)


def peak_accuracy(rt: ResultsTable, strategy, classifier):
    """(n, mean) of the best row; ties go to the smallest n."""
    rows = rt.select(strategy, classifier)
    if not rows:
        raise ValueError(f"no results for ({strategy}, {classifier})")
    best = max(rows, key=lambda r: (r.mean, -r.n))
    return best.n, best.mean


def emit_plot_data(rt: ResultsTable, strategy) -> str:
    """CSV (n, classifier, mean, std) sorted by classifier then n."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "classifier", "mean", "std"])
    rows = rt.select(strategy) if strategy is not None else []
    for r in sorted(rows, key=lambda r: (r.classifier, r.n)):
        w.writerow([r.n, r.classifier, repr(r.mean), repr(r.std)])
    return buf.getvalue()


# --- dataset construction -------------------------------------------------


def circuit_seed(master, family: Family, n, index):
    return derive_seed(master, family.label, n, index)


def _circuit_features(job):
    master, family, n, index, n_c, lam, strategies = job
    c = generate_circuit(family, n, n_c, circuit_seed(master, family, n, index))
    psi = run(c)
    # one measurement seed per circuit, so Z-only and NN see identical shots
    mseed = derive_seed(c.seed, 1)
    return [featurize(measure(c, s, lam, mseed, state=psi)).values for s in strategies]


def build_datasets(cfg: SweepConfig, n: int, strategies):
    """{strategy: (X, y)} for qubit count ``n`` over all configured families."""
    families = [parse_family(f) for f in cfg.families]
    jobs = [
        (cfg.seed, fam, n, k, cfg.n_c, cfg.lam, tuple(strategies))
        for fam in families
        for k in range(cfg.circuits)
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(_circuit_features, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        rows = [_circuit_features(j) for j in jobs]
    y = np.array([job[1].label for job in jobs], dtype=np.int64)
    return {s: (np.vstack([r[i] for r in rows]), y) for i, s in enumerate(strategies)}


def dataset_path(out, n, strategy):
    return Path(out) / f"dataset_n{n}_{parse_strategy(strategy).slug}.csv"


def run_sweep(cfg: SweepConfig, force: bool = False, progress=None) -> ResultsTable:
    """Run (or resume) a sweep; results land in ``<out>/results.csv``."""
    _, strategies, classifiers = cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
    results_path = out / RESULTS_FILE
    table = ResultsTable.load(results_path) if results_path.exists() else ResultsTable()
    for n in cfg.qubits:
        todo = [
            s
            for s in strategies
            if force or any((s.slug, c, n) not in table for c in classifiers)
        ]
        if not todo:
            continue
        data = {}
        missing = []
        for s in todo:
            p = dataset_path(out, n, s)
            if p.exists() and not force:
                X, y, _ = read_dataset(p)
                data[s] = (X, y)
            else:
                missing.append(s)
        if missing:
            log.info("building datasets n=%d strategies=%s", n, [s.slug for s in missing])
            built = build_datasets(cfg, n, missing)
            for s, (X, y) in built.items():
                assert X.shape[1] == feature_dim(s, n)
                write_dataset(dataset_path(out, n, s), s, n, X, y)
                # reload so fresh and resumed runs see identical (CSV-rounded) values
                X, y, _ = read_dataset(dataset_path(out, n, s))
                data[s] = (X, y)
        split_seed = derive_seed(cfg.seed, n, 0x5EED)
        for s in todo:
            X, y = data[s]
            for c in classifiers:
                if (s.slug, c, n) in table and not force:
                    continue
                r = evaluate(X, y, c, cfg.splits, cfg.train_frac, split_seed, strategy=s.slug, n=n)
                table.put(r)
                table.save(results_path)
                log.info("n=%d %s %s mean=%.3f std=%.3f", n, s.slug, c, r.mean, r.std)
                if progress is not None:
                    progress(r)
    return table
