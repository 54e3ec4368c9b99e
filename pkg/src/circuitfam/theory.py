"""Monte Carlo checks of the basis-concentration and variance results.

All correlators here come from the exact statevector oracle; only the
variance report samples shots.
"""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass

import numpy as np

from .circuits import TWO_PI, Circuit, Family, Gate, GateKind, generate_circuit
from .measurement import shadow_outcomes
from .rng import derive_seed, make_rng
from .shadows import PauliTarget
from .simulator import PauliString, exact_expectation, indices_to_bits, run, sample_indices

# pools split by whether the gate commutes with every single-qubit Z
DIAGONAL_POOL = (GateKind.S, GateKind.T, GateKind.CZ, GateKind.RZ)
NON_DIAGONAL_POOL = (GateKind.H, GateKind.CNOT)
MU = 1.0 / 3.0


@dataclass
class AlphaCircuitModel:
    n: int
    N: int
    alpha: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.N < 0 or not 0.0 <= self.alpha <= 1.0:
            raise ValueError("need n >= 2, N >= 0 and alpha in [0, 1]")


def sample_alpha_circuit(model: AlphaCircuitModel) -> Circuit:
    """N gates, each diagonal with probability alpha, uniform within its pool."""
    rng = make_rng(model.seed)
    n, N = model.n, model.N
    diag = rng.random(N) < model.alpha
    pick_d = rng.integers(0, len(DIAGONAL_POOL), size=N)
    pick_o = rng.integers(0, len(NON_DIAGONAL_POOL), size=N)
    single = rng.integers(0, n, size=N)
    first = rng.integers(0, n, size=N)
    second = rng.integers(0, n - 1, size=N)
    second = second + (second >= first)
    angles = rng.uniform(0.0, TWO_PI, size=N)
    gates = []
    for k in range(N):
        kind = DIAGONAL_POOL[pick_d[k]] if diag[k] else NON_DIAGONAL_POOL[pick_o[k]]
        if kind in (GateKind.CZ, GateKind.CNOT):
            gates.append(Gate(kind, (int(first[k]), int(second[k]))))
        elif kind is GateKind.RZ:
            gates.append(Gate(kind, (int(single[k]),), float(angles[k])))
        else:
            gates.append(Gate(kind, (int(single[k]),)))
    return Circuit(n, None, gates, int(model.seed))


def _pauli(n, target: PauliTarget) -> PauliString:
    return PauliString.from_sites(n, dict(zip(target.sites, target.letters)))


def _mean_se(values):
    v = np.asarray(values, dtype=np.float64)
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return float(v.mean()), se


def offdiag_decay_curve(n, N, alphas, target: PauliTarget, trials, seed):
    """Mean |<target>| over alpha-model circuits, one row per alpha."""
    if all(letter == "Z" for letter in target.letters):
        raise ValueError("target must carry a non-Z letter on at least one site")
    pauli = _pauli(n, target)
    rows = []
    for a_idx, alpha in enumerate(alphas):
        vals = []
        for t in range(trials):
            model = AlphaCircuitModel(n, N, float(alpha), derive_seed(seed, a_idx, t))
            vals.append(abs(exact_expectation(run(sample_alpha_circuit(model)), pauli)))
        mean, se = _mean_se(vals)
        rows.append(
            {
                "alpha": float(alpha),
                "mean": mean,
                "se": se,
                "bound": 2.0,  # the decay constant is gate-set dependent; only the p -> 0 limit is pinned
            }
        )
    return rows


def bridge_bound(alpha, N, mu=MU):
    return mu * mu + alpha**N * (1.0 - mu * mu)


def bridge_bound_check(n, N, alpha, trials, seed, site=0, mu=MU):
    """Monte Carlo E[<Z_i Z_{i+1}>^2] against mu^2 + alpha^N (1 - mu^2)."""
    if not 0 <= site < n - 1:
        raise ValueError(f"adjacent pair ({site}, {site + 1}) invalid for n={n}")
    pauli = PauliString.from_sites(n, {site: "Z", site + 1: "Z"})
    vals = []
    for t in range(trials):
        model = AlphaCircuitModel(n, N, float(alpha), derive_seed(seed, t))
        vals.append(exact_expectation(run(sample_alpha_circuit(model)), pauli) ** 2)
    mean, se = _mean_se(vals)
    return {"alpha": float(alpha), "N": N, "mean": mean, "se": se, "bound": bridge_bound(alpha, N, mu)}


@dataclass
class VarianceReport:
    exact_zz: float
    var_z_theory: float
    var_s_theory: float
    var_z: float
    var_z_se: float
    var_s: float
    var_s_se: float
    ratio_theory: float
    ratio: float
    shots: int

    def to_dict(self):
        d = asdict(self)
        # JSON has no infinity literal
        for k in ("ratio_theory", "ratio"):
            if math.isinf(d[k]):
                d[k] = "inf"
        return d


def variance_ratio(x2: float) -> float:
    """(9 - x2) / (1 - x2) for x2 = <ZZ>^2, infinite at x2 = 1."""
    den = 1.0 - x2
    return math.inf if den <= 1e-12 else (9.0 - x2) / den


def _var_se(samples):
    c = samples - samples.mean()
    var = float(np.mean(c * c))
    m4 = float(np.mean(c**4))
    return var, math.sqrt(max(m4 - var * var, 0.0) / samples.size)


def variance_report(c: Circuit, i: int, j: int, shots: int, seed: int) -> VarianceReport:
    """Empirical per-shot variances of the Z-only and shadow ZZ estimators."""
    if i == j:
        raise ValueError("pair needs distinct qubits")
    n = c.n_qubits
    psi = run(c)
    x = exact_expectation(psi, PauliString.from_sites(n, {i: "Z", j: "Z"}))
    rng_z = make_rng(seed, 0)
    bits = indices_to_bits(sample_indices(psi, shots, rng_z), n)
    o_z = 1.0 - 2.0 * (bits[:, i] ^ bits[:, j])
    rng_s = make_rng(seed, 1)
    bases = rng_s.integers(0, 3, size=(shots, n)).astype(np.uint8)
    sbits = indices_to_bits(shadow_outcomes(psi, bases, rng_s.random(shots)), n)
    match = (bases[:, i] == 0) & (bases[:, j] == 0)
    o_s = np.where(match, 9.0 * (1.0 - 2.0 * (sbits[:, i] ^ sbits[:, j])), 0.0)
    var_z, se_z = _var_se(o_z)
    var_s, se_s = _var_se(o_s)
    x2 = x * x
    return VarianceReport(
        exact_zz=x,
        var_z_theory=1.0 - x2,
        var_s_theory=9.0 - x2,
        var_z=var_z,
        var_z_se=se_z,
        var_s=var_s,
        var_s_se=se_s,
        ratio_theory=variance_ratio(x2),
        ratio=var_s / var_z if var_z > 0 else math.inf,
        shots=shots,
    )


def strip_final_hadamards(c: Circuit) -> Circuit:
    if c.family is not Family.IQP:
        raise ValueError("only IQP circuits carry a final Hadamard layer")
    return Circuit(c.n_qubits, None, c.gates[: len(c.gates) - c.n_qubits], c.seed)


def iqp_frame_check(n, n_c, circuits, seed):
    """Max |<X_i X_j>(full) - <Z_i Z_j>(no final H layer)| per IQP circuit."""
    rows = []
    for k in range(circuits):
        c = generate_circuit(Family.IQP, n, n_c, derive_seed(seed, k))
        full = run(c)
        pre = run(strip_final_hadamards(c))
        worst = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                xx = exact_expectation(full, PauliString.from_sites(n, {i: "X", j: "X"}))
                zz = exact_expectation(pre, PauliString.from_sites(n, {i: "Z", j: "Z"}))
                worst = max(worst, abs(xx - zz))
        rows.append({"circuit": k, "seed": c.seed, "max_abs_diff": worst})
    return rows


def write_check_csv(dest, rows, columns):
    """Per-check CSV to a path or open text handle."""
    if not hasattr(dest, "write"):
        with open(dest, "w", newline="") as fh:
            return write_check_csv(fh, rows, columns)
    w = csv.DictWriter(dest, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
