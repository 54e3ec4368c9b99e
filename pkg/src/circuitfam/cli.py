"""Command-line entry point (``circuitfam`` / ``python -m circuitfam``).

Exit codes: 0 success, 1 validation error (bad flags or inputs), 2 I/O error.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

import numpy as np

from .circuits import CircuitError, generate_circuit, parse_family, read_circuits, serialize_circuit
from .classifiers import evaluate, parse_classifier
from .features import featurize, read_dataset, write_dataset
from .harness import PRESETS, ResultsTable, SweepConfig, circuit_seed, default_out, emit_plot_data, run_sweep
from .measurement import measure, parse_strategy, read_measurements, write_measurements
from .rng import derive_seed
from .shadows import PauliTarget
from . import theory

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text):
    return [v.strip() for v in text.split(",") if v.strip()]


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_generate(args):
    family = parse_family(args.family)
    circuits = [
        generate_circuit(family, args.qubits, args.gates, circuit_seed(args.seed, family, args.qubits, k))
        for k in range(args.circuits)
    ]
    with _output(args.out) as fh:
        for c in circuits:
            fh.write(serialize_circuit(c) + "\n")


def cmd_measure(args):
    circuits = read_circuits(args.circuits)
    strategy = parse_strategy(args.strategy)
    with _output(args.out) as fh:
        for k, c in enumerate(circuits):
            write_measurements(fh, measure(c, strategy, args.lam, derive_seed(args.seed, k)))


def cmd_featurize(args):
    with open(args.measurements) as fh:
        sets = read_measurements(fh)
    if not sets:
        raise ValueError("no measurement sets in input")
    strategies = {ms.strategy for ms in sets}
    ns = {ms.n for ms in sets}
    if len(strategies) != 1 or len(ns) != 1:
        raise ValueError("all measurement sets in one dataset must share strategy and n")
    rows, labels = [], []
    for ms in sets:
        if args.label is not None:
            labels.append(args.label)
        elif ms.family is not None:
            labels.append(parse_family(ms.family).label)
        else:
            raise ValueError("measurement header lacks 'family'; pass --label")
        rows.append(featurize(ms).values)
    with _output(args.out) as fh:
        write_dataset(fh, strategies.pop(), ns.pop(), np.vstack(rows), np.array(labels))


def cmd_train(args):
    X, y, _ = read_dataset(args.dataset)
    for name in args.classifier:
        r = evaluate(X, y, parse_classifier(name), args.splits, args.train_frac, args.seed,
                     strategy=args.strategy or "", n=args.n or 0)
        print(json.dumps(r.to_dict()))


def _sweep_config(args):
    cfg = SweepConfig.load(args.config) if args.config else SweepConfig()
    if args.preset:
        for k, v in PRESETS[args.preset].items():
            setattr(cfg, k, v)
    overrides = {
        "families": args.families,
        "qubits": args.qubits,
        "lam": args.lam,
        "circuits": args.circuits,
        "n_c": args.gates,
        "strategies": args.strategies,
        "classifiers": args.classifiers,
        "splits": args.splits,
        "seed": args.seed,
        "out": args.out,
        "workers": args.workers,
    }
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    if args.seed is None and not args.config:
        raise ValueError("--seed is required (or provide it in --config)")
    return cfg


def cmd_sweep(args):
    cfg = _sweep_config(args)
    table = run_sweep(cfg, force=args.force)
    print(f"{len(table)} result rows in {cfg.out}/results.csv")


def cmd_plot_data(args):
    table = ResultsTable.load(args.results)
    with _output(args.out) as fh:
        fh.write(emit_plot_data(table, args.strategy))


def _theory_csv(args, rows):
    with _output(args.out) as fh:
        theory.write_check_csv(fh, rows, ["check", "point", "empirical", "se", "theory", "pass"])


def cmd_theory_variance(args):
    family = parse_family(args.family)
    c = generate_circuit(family, args.n, args.gates, derive_seed(args.seed, 0))
    i, j = args.pair
    rep = theory.variance_report(c, i, j, args.shots, derive_seed(args.seed, 1))
    print(json.dumps(rep.to_dict()))


def cmd_theory_decay(args):
    letters = args.target.upper()
    rows = theory.offdiag_decay_curve(args.n, args.gates, args.alphas, PauliTarget.pair(0, 1, letters),
                                      args.trials, args.seed)
    out = []
    prev = None
    for r in rows:
        ok = r["mean"] <= r["bound"]
        if prev is not None:
            ok = ok and r["mean"] - r["se"] <= prev["mean"] + prev["se"]
        out.append({"check": f"decay_{letters}", "point": r["alpha"], "empirical": r["mean"],
                    "se": r["se"], "theory": r["bound"], "pass": ok})
        prev = r
    _theory_csv(args, out)


def cmd_theory_bridge(args):
    out = []
    for alpha in args.alphas:
        r = theory.bridge_bound_check(args.n, args.gates, alpha, args.trials, derive_seed(args.seed, int(alpha * 1e6)))
        out.append({"check": "bridge", "point": alpha, "empirical": r["mean"], "se": r["se"],
                    "theory": r["bound"], "pass": r["mean"] >= r["bound"] - 2 * r["se"]})
    _theory_csv(args, out)


def cmd_theory_iqp_frame(args):
    rows = theory.iqp_frame_check(args.n, args.gates, args.circuits, args.seed)
    _theory_csv(args, [
        {"check": "iqp_frame", "point": r["circuit"], "empirical": r["max_abs_diff"], "se": 0.0,
         "theory": 0.0, "pass": r["max_abs_diff"] <= 1e-10}
        for r in rows
    ])


def build_parser():
    p = Parser(prog="circuitfam", description="Circuit-family classification from polynomial measurements.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    g = sub.add_parser("generate", help="write random circuits as JSON lines")
    g.add_argument("--family", required=True)
    g.add_argument("--qubits", type=int, required=True)
    g.add_argument("--gates", type=int, default=1000, help="interior gate count")
    g.add_argument("--circuits", type=int, default=1)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("measure", help="acquire shots for each circuit in a JSONL file")
    m.add_argument("--circuits", required=True, help="circuit JSONL file")
    m.add_argument("--strategy", required=True)
    m.add_argument("--lam", type=int, default=16)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--out")
    m.set_defaults(func=cmd_measure)

    f = sub.add_parser("featurize", help="turn a measurement JSONL file into a dataset CSV")
    f.add_argument("--measurements", required=True)
    f.add_argument("--label", type=int)
    f.add_argument("--out")
    f.set_defaults(func=cmd_featurize)

    t = sub.add_parser("train", help="evaluate classifiers on a dataset CSV")
    t.add_argument("--dataset", required=True)
    t.add_argument("--classifier", type=_names, default=["forest"])
    t.add_argument("--splits", type=int, default=10)
    t.add_argument("--train-frac", type=float, default=0.8)
    t.add_argument("--strategy")
    t.add_argument("--n", type=int)
    t.add_argument("--seed", type=int, required=True)
    t.set_defaults(func=cmd_train)

    s = sub.add_parser("sweep", help="run the full pipeline over qubit counts and strategies")
    s.add_argument("--config", help="JSON file with SweepConfig fields")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--families", type=_names)
    s.add_argument("--qubits", type=_ints)
    s.add_argument("--lam", type=int)
    s.add_argument("--circuits", type=int, help="circuits per family per qubit count")
    s.add_argument("--gates", type=int, help="interior gates per circuit")
    s.add_argument("--strategies", type=_names)
    s.add_argument("--classifiers", type=_names)
    s.add_argument("--splits", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help=f"output directory (default ${'{'}CIRCUITFAM_OUT{'}'} or {default_out()!r})")
    s.add_argument("--workers", type=int)
    s.add_argument("--force", action="store_true", help="recompute keys already present")
    s.set_defaults(func=cmd_sweep)

    th = sub.add_parser("theory", help="numerical checks of the theoretical results")
    tsub = th.add_subparsers(dest="check", required=True, parser_class=Parser)
    v = tsub.add_parser("variance")
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--family", default="clifford-t")
    v.add_argument("--gates", type=int, default=20)
    v.add_argument("--pair", type=_ints, default=[0, 1])
    v.add_argument("--shots", type=int, default=100_000)
    v.add_argument("--seed", type=int, required=True)
    v.set_defaults(func=cmd_theory_variance)
    d = tsub.add_parser("decay")
    d.add_argument("--n", type=int, default=4)
    d.add_argument("--gates", type=int, default=40)
    d.add_argument("--alphas", type=_floats, default=[0.0, 0.25, 0.5, 0.75])
    d.add_argument("--target", default="XX")
    d.add_argument("--trials", type=int, default=500)
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_theory_decay)
    b = tsub.add_parser("bridge")
    b.add_argument("--n", type=int, default=4)
    b.add_argument("--gates", type=int, default=20)
    b.add_argument("--alphas", type=_floats, default=[0.0, 0.5, 0.9, 1.0])
    b.add_argument("--trials", type=int, default=2000)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_theory_bridge)
    q = tsub.add_parser("iqp-frame")
    q.add_argument("--n", type=int, default=4)
    q.add_argument("--gates", type=int, default=1000)
    q.add_argument("--circuits", type=int, default=20)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_theory_iqp_frame)

    pd = sub.add_parser("plot-data", help="accuracy-vs-n CSV for one strategy")
    pd.add_argument("--results", required=True)
    pd.add_argument("--strategy", required=True)
    pd.add_argument("--out")
    pd.set_defaults(func=cmd_plot_data)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        args.func(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, CircuitError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
