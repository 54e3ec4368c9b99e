"""Time each hot kernel on the numba path and the pure-numpy path.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once per backend before timing, so JIT compilation is
excluded. Reports the best of ``--repeat`` runs.
"""
import argparse
import time

import numpy as np

from circuitfam import _accel
from circuitfam.circuits import Family, generate_circuit
from circuitfam.kernels import cart, smo
from circuitfam.kernels import statevector as sv
from circuitfam.measurement import measure_shadows
from circuitfam.simulator import run


def cases():
    rng = np.random.default_rng(0)

    c = generate_circuit(Family.CLIFFORD_T, 14, 1000, seed=1)
    psi = run(c)
    shadow_c = generate_circuit(Family.IQP, 8, 1000, seed=2)

    X = rng.normal(size=(3000, 60))
    y = rng.integers(0, 3, 3000)
    idx = np.arange(3000, dtype=np.int64)
    feats = np.arange(60, dtype=np.int64)

    Xs = rng.normal(size=(600, 10))
    ys = np.where(Xs[:, 0] + 0.5 * rng.normal(size=600) > 0, 1.0, -1.0)
    K = np.exp(-0.1 * ((Xs[:, None, :] - Xs[None, :, :]) ** 2).sum(-1))

    return [
        ("gates n=14, 1000 gates", lambda: run(c)),
        ("cdf n=14", lambda: sv.cdf(psi.amplitudes)),
        ("shadows n=8, 1024 shots", lambda: measure_shadows(shadow_c, 16, seed=3)),
        ("best_split 3000x60", lambda: cart.best_split(X, y, idx, feats, 60, 3)),
        ("smo 600 samples", lambda: smo.solve_smo(K, ys, 1.0)),
    ]


def best_time(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<26}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, fn in cases():
        times = {}
        for flag in (True, False):
            _accel.USE_NUMBA = flag
            times[flag] = best_time(fn, args.repeat) * 1e3
        print(f"{name:<26}{times[True]:>12.2f}{times[False]:>12.2f}{times[False] / times[True]:>9.1f}x")


if __name__ == "__main__":
    main()
