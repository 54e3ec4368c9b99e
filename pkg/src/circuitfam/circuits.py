"""Gate/circuit data model, random circuit families and JSON-lines I/O."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .rng import make_rng

TWO_PI = 2.0 * math.pi


class GateKind(str, Enum):
    H = "H"
    S = "S"
    T = "T"
    CNOT = "CNOT"
    CZ = "CZ"
    RZ = "RZ"


TWO_QUBIT = frozenset({GateKind.CNOT, GateKind.CZ})

# integer codes used by the simulator kernels
GATE_CODES = {
    GateKind.H: 0,
    GateKind.S: 1,
    GateKind.T: 2,
    GateKind.CNOT: 3,
    GateKind.CZ: 4,
    GateKind.RZ: 5,
}


class Family(str, Enum):
    CLIFFORD = "Clifford"
    CLIFFORD_T = "CliffordT"
    IQP = "IQP"

    @property
    def label(self):
        """Class index used by the classifiers (IQP=0, Clifford=1, CliffordT=2)."""
        return FAMILY_LABELS[self]


FAMILY_LABELS = {Family.IQP: 0, Family.CLIFFORD: 1, Family.CLIFFORD_T: 2}
LABEL_FAMILIES = {v: k for k, v in FAMILY_LABELS.items()}

_FAMILY_ALIASES = {
    "clifford": Family.CLIFFORD,
    "cliffordt": Family.CLIFFORD_T,
    "clifford-t": Family.CLIFFORD_T,
    "clifford+t": Family.CLIFFORD_T,
    "clifford_t": Family.CLIFFORD_T,
    "iqp": Family.IQP,
}

# interior gate pools and selection probabilities
FAMILY_GATES = {
    Family.CLIFFORD: ((GateKind.H, GateKind.S, GateKind.CNOT), (1 / 3, 1 / 3, 1 / 3)),
    Family.CLIFFORD_T: (
        (GateKind.S, GateKind.CNOT, GateKind.H, GateKind.T),
        (0.2, 0.2, 0.2, 0.4),
    ),
    Family.IQP: ((GateKind.T, GateKind.RZ, GateKind.CZ), (1 / 3, 1 / 3, 1 / 3)),
}


class CircuitError(ValueError):
    """Invalid circuit parameters or malformed serialized circuit."""


def parse_family(value) -> Family:
    if isinstance(value, Family):
        return value
    try:
        return Family(value)
    except ValueError:
        pass
    key = str(value).strip().lower()
    if key not in _FAMILY_ALIASES:
        raise CircuitError(f"unknown circuit family {value!r}")
    return _FAMILY_ALIASES[key]


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def validate(self, n_qubits: int) -> None:
        want = 2 if self.kind in TWO_QUBIT else 1
        if len(self.qubits) != want:
            raise CircuitError(f"{self.kind.value} acts on {want} qubit(s), got {self.qubits}")
        for q in self.qubits:
            if not 0 <= q < n_qubits:
                raise CircuitError(f"qubit index {q} out of range for n={n_qubits}")
        if want == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitError(f"{self.kind.value} needs two distinct qubits")
        if self.kind is GateKind.RZ:
            if self.angle is None or not 0.0 <= self.angle < TWO_PI:
                raise CircuitError(f"RZ angle must lie in [0, 2pi), got {self.angle}")
        elif self.angle is not None:
            raise CircuitError(f"{self.kind.value} takes no angle")


@dataclass
class Circuit:
    n_qubits: int
    family: Family | None
    gates: list[Gate] = field(default_factory=list)
    seed: int = 0

    def validate(self) -> None:
        if self.n_qubits < 1:
            raise CircuitError("n_qubits must be positive")
        for g in self.gates:
            g.validate(self.n_qubits)
        kinds = [g.kind for g in self.gates]
        n = self.n_qubits
        if self.family is Family.CLIFFORD:
            allowed = {GateKind.H, GateKind.S, GateKind.CNOT}
        elif self.family is Family.CLIFFORD_T:
            allowed = {GateKind.H, GateKind.S, GateKind.T, GateKind.CNOT}
        elif self.family is Family.IQP:
            if len(self.gates) < 2 * n:
                raise CircuitError("IQP circuit lacks its Hadamard layers")
            for layer in (self.gates[:n], self.gates[-n:]):
                if [g.kind for g in layer] != [GateKind.H] * n or sorted(
                    g.qubits[0] for g in layer
                ) != list(range(n)):
                    raise CircuitError("IQP boundary layer must be one H per qubit")
            kinds = kinds[n:-n]
            allowed = {GateKind.T, GateKind.RZ, GateKind.CZ}
        else:
            return
        bad = set(kinds) - allowed
        if bad:
            raise CircuitError(
                f"gates {sorted(k.value for k in bad)} not allowed in {self.family.value} circuit"
            )

    @property
    def interior(self) -> list[Gate]:
        if self.family is Family.IQP:
            return self.gates[self.n_qubits : len(self.gates) - self.n_qubits]
        return self.gates

    def to_arrays(self):
        """Gate list as parallel (codes, q0, q1, angles) arrays for the kernels."""
        m = len(self.gates)
        codes = np.empty(m, dtype=np.int64)
        q0 = np.empty(m, dtype=np.int64)
        q1 = np.full(m, -1, dtype=np.int64)
        angles = np.zeros(m, dtype=np.float64)
        for k, g in enumerate(self.gates):
            codes[k] = GATE_CODES[g.kind]
            q0[k] = g.qubits[0]
            if len(g.qubits) == 2:
                q1[k] = g.qubits[1]
            if g.angle is not None:
                angles[k] = g.angle
        return codes, q0, q1, angles


def _draw_gates(rng, n, n_c, kinds, probs):
    choice = rng.choice(len(kinds), size=n_c, p=probs)
    single = rng.integers(0, n, size=n_c)
    # ordered pair of distinct qubits, uniform over n(n-1) choices
    first = rng.integers(0, n, size=n_c)
    second = rng.integers(0, n - 1, size=n_c)
    second = second + (second >= first)
    angles = rng.uniform(0.0, TWO_PI, size=n_c)
    gates = []
    for k in range(n_c):
        kind = kinds[choice[k]]
        if kind in TWO_QUBIT:
            gates.append(Gate(kind, (int(first[k]), int(second[k]))))
        elif kind is GateKind.RZ:
            gates.append(Gate(kind, (int(single[k]),), float(angles[k])))
        else:
            gates.append(Gate(kind, (int(single[k]),)))
    return gates


def generate_circuit(family, n: int, n_c: int = 1000, seed: int = 0) -> Circuit:
    """Random circuit of ``n_c`` interior gates drawn from ``family``.

    IQP circuits are additionally wrapped in a Hadamard layer on every qubit at
    both ends; those ``2n`` gates are stored explicitly and are not counted in
    ``n_c``.
    """
    family = parse_family(family)
    if n < 2:
        raise CircuitError(f"need at least 2 qubits, got {n}")
    if n_c < 0:
        raise CircuitError(f"gate count must be non-negative, got {n_c}")
    rng = make_rng(seed)
    kinds, probs = FAMILY_GATES[family]
    gates = _draw_gates(rng, n, n_c, kinds, probs)
    if family is Family.IQP:
        layer = [Gate(GateKind.H, (q,)) for q in range(n)]
        gates = layer + gates + list(layer)
    return Circuit(n, family, gates, int(seed))


# --- JSON lines -----------------------------------------------------------


def circuit_to_dict(c: Circuit) -> dict:
    gates = []
    for g in c.gates:
        rec = {"kind": g.kind.value, "qubits": list(g.qubits)}
        if g.angle is not None:
            rec["angle"] = g.angle
        gates.append(rec)
    return {
        "n": c.n_qubits,
        "family": c.family.value if c.family is not None else None,
        "seed": c.seed,
        "gates": gates,
    }


def _gate_json(g: Gate) -> str:
    body = f'{{"kind":"{g.kind.value}","qubits":[{",".join(str(q) for q in g.qubits)}]'
    if g.angle is not None:
        # 17 significant digits always round-trip a binary64 value
        body += f',"angle":{g.angle:.17g}'
    return body + "}"


def serialize_circuit(c: Circuit) -> str:
    family = json.dumps(c.family.value if c.family is not None else None)
    gates = ",".join(_gate_json(g) for g in c.gates)
    return f'{{"n":{c.n_qubits},"family":{family},"seed":{c.seed},"gates":[{gates}]}}'


def parse_circuit(line: str) -> Circuit:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"not valid JSON: {exc}") from None
    if not isinstance(rec, dict):
        raise CircuitError("circuit record must be a JSON object")
    for key in ("n", "family", "seed", "gates"):
        if key not in rec:
            raise CircuitError(f"missing field {key!r}")
    n = rec["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise CircuitError(f"field 'n' must be a positive integer, got {n!r}")
    family = None if rec["family"] is None else parse_family(rec["family"])
    seed = rec["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise CircuitError(f"field 'seed' must be an integer, got {seed!r}")
    if not isinstance(rec["gates"], list):
        raise CircuitError("field 'gates' must be a list")
    gates = []
    for k, g in enumerate(rec["gates"]):
        if not isinstance(g, dict) or "kind" not in g or "qubits" not in g:
            raise CircuitError(f"gates[{k}] needs 'kind' and 'qubits'")
        try:
            kind = GateKind(g["kind"])
        except ValueError:
            raise CircuitError(f"gates[{k}].kind: unknown gate kind {g['kind']!r}") from None
        qubits = g["qubits"]
        if not isinstance(qubits, list) or not all(
            isinstance(q, int) and not isinstance(q, bool) for q in qubits
        ):
            raise CircuitError(f"gates[{k}].qubits must be a list of integers")
        angle = g.get("angle")
        if angle is not None:
            if not isinstance(angle, (int, float)) or isinstance(angle, bool):
                raise CircuitError(f"gates[{k}].angle must be a number")
            angle = float(angle)
        gates.append(Gate(kind, tuple(qubits), angle))
    c = Circuit(n, family, gates, seed)
    c.validate()
    return c


def write_circuits(path, circuits) -> None:
    with open(path, "w") as fh:
        for c in circuits:
            fh.write(serialize_circuit(c) + "\n")


def read_circuits(path) -> list[Circuit]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                out.append(parse_circuit(line))
            except CircuitError as exc:
                raise CircuitError(f"{path}:{lineno}: {exc}") from None
    return out
