"""Shot acquisition for the four measurement strategies under s = lambda * n^2."""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .circuits import Circuit
from .kernels import statevector as kern
from .rng import make_rng
from .simulator import (
    BASIS_CODES,
    BASIS_LETTERS,
    Statevector,
    apply_basis_rotation,
    indices_to_bits,
    run,
    sample_indices,
)

DEFAULT_LAMBDA = 16


class Strategy(str, Enum):
    Z_ONLY = "ZOnly"
    NN = "NN"
    MULTI_BASIS = "MultiBasis"
    SHADOWS = "Shadows"

    @property
    def slug(self):
        return _SLUGS[self]


_SLUGS = {
    Strategy.Z_ONLY: "z-only",
    Strategy.NN: "nn",
    Strategy.MULTI_BASIS: "multi-basis",
    Strategy.SHADOWS: "shadows",
}
_STRATEGY_ALIASES = {v: k for k, v in _SLUGS.items()}
_STRATEGY_ALIASES.update({s.value.lower(): s for s in Strategy})
_STRATEGY_ALIASES.update({"zonly": Strategy.Z_ONLY, "z": Strategy.Z_ONLY, "mb": Strategy.MULTI_BASIS})


def parse_strategy(value) -> Strategy:
    if isinstance(value, Strategy):
        return value
    key = str(value).strip().lower()
    if key not in _STRATEGY_ALIASES:
        raise ValueError(f"unknown measurement strategy {value!r}")
    return _STRATEGY_ALIASES[key]


@dataclass(frozen=True)
class ShotRecord:
    bits: str
    bases: str


@dataclass
class MeasurementSet:
    """Shots of one circuit; ``bits``/``bases`` are (shots, n) uint8 arrays.

    Basis codes are 0=Z, 1=X, 2=Y. Column q is qubit q.
    """

    strategy: Strategy
    n: int
    lam: int
    bits: np.ndarray
    bases: np.ndarray
    circuit_seed: int = 0
    family: str | None = None

    @property
    def budget(self) -> int:
        return shot_budget(self.n, self.lam)

    def __len__(self):
        return self.bits.shape[0]

    @property
    def shots(self) -> list[ShotRecord]:
        return list(self.records())

    def records(self):
        for b, u in zip(self.bits, self.bases):
            yield ShotRecord("".join("01"[x] for x in b), "".join(BASIS_LETTERS[x] for x in u))

    def block(self, basis: str) -> np.ndarray:
        """Bits of the shots measured uniformly in ``basis`` (fixed-basis sets only)."""
        if self.strategy is Strategy.SHADOWS:
            raise ValueError("shadow sets have no uniform-basis blocks")
        code = BASIS_CODES[basis]
        mask = np.all(self.bases == code, axis=1)
        return self.bits[mask]


def shot_budget(n: int, lam: int = DEFAULT_LAMBDA) -> int:
    if n < 1 or lam < 1:
        raise ValueError("need n >= 1 and lambda >= 1")
    return int(lam) * int(n) * int(n)


def multi_basis_blocks(budget: int) -> tuple[int, int, int]:
    """(Z, X, Y) block sizes; the remainder goes to Z first, then X."""
    q, r = divmod(budget, 3)
    return q + (r >= 1), q + (r >= 2), q


def _state(c: Circuit, state):
    return run(c) if state is None else state


def _fixed(strategy, c, lam, seed, state):
    psi = _state(c, state)
    n = c.n_qubits
    budget = shot_budget(n, lam)
    idx = sample_indices(psi, budget, make_rng(seed))
    bits = indices_to_bits(idx, n)
    return MeasurementSet(
        strategy, n, lam, bits, np.zeros_like(bits), c.seed, _family(c)
    )


def _family(c):
    return c.family.value if c.family is not None else None


def measure_z_only(c: Circuit, lam: int = DEFAULT_LAMBDA, seed: int = 0, state: Statevector | None = None):
    return _fixed(Strategy.Z_ONLY, c, lam, seed, state)


def measure_nn(c: Circuit, lam: int = DEFAULT_LAMBDA, seed: int = 0, state: Statevector | None = None):
    # same acquisition as Z-only; the adjacent-pair restriction lives in features
    return _fixed(Strategy.NN, c, lam, seed, state)


def measure_multi_basis(c: Circuit, lam: int = DEFAULT_LAMBDA, seed: int = 0, state: Statevector | None = None):
    psi = _state(c, state)
    n = c.n_qubits
    rng = make_rng(seed)
    bits, bases = [], []
    for letter, size in zip("ZXY", multi_basis_blocks(shot_budget(n, lam))):
        if size == 0:
            continue
        rotated = apply_basis_rotation(psi, letter * n)
        bits.append(indices_to_bits(sample_indices(rotated, size, rng), n))
        bases.append(np.full((size, n), BASIS_CODES[letter], dtype=np.uint8))
    return MeasurementSet(
        Strategy.MULTI_BASIS, n, lam, np.vstack(bits), np.vstack(bases), c.seed, _family(c)
    )


def shadow_outcomes(psi: Statevector, bases: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Outcome index per shot given per-shot bases and uniforms.

    Shots sharing a basis assignment share one rotated state; the result is
    identical to rotating a fresh copy for every shot.
    """
    n = psi.n
    keys = bases.astype(np.int64) @ (3 ** np.arange(n, dtype=np.int64))
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    order = np.argsort(inverse, kind="stable")
    starts = np.zeros(uniq.shape[0] + 1, dtype=np.int64)
    np.cumsum(np.bincount(inverse, minlength=uniq.shape[0]), out=starts[1:])
    rows = np.ascontiguousarray(bases[first], dtype=np.int64)
    return kern.rotated_outcomes(psi.amplitudes, rows, order.astype(np.int64), starts, u)


def measure_shadows(c: Circuit, lam: int = DEFAULT_LAMBDA, seed: int = 0, state: Statevector | None = None):
    psi = _state(c, state)
    n = c.n_qubits
    budget = shot_budget(n, lam)
    rng = make_rng(seed)
    bases = rng.integers(0, 3, size=(budget, n)).astype(np.uint8)
    u = rng.random(budget)
    bits = indices_to_bits(shadow_outcomes(psi, bases, u), n)
    return MeasurementSet(Strategy.SHADOWS, n, lam, bits, bases, c.seed, _family(c))


MEASURE = {
    Strategy.Z_ONLY: measure_z_only,
    Strategy.NN: measure_nn,
    Strategy.MULTI_BASIS: measure_multi_basis,
    Strategy.SHADOWS: measure_shadows,
}


def measure(c: Circuit, strategy, lam: int = DEFAULT_LAMBDA, seed: int = 0, state=None) -> MeasurementSet:
    return MEASURE[parse_strategy(strategy)](c, lam, seed, state)


# --- JSON lines -----------------------------------------------------------


def write_measurements(fh, ms: MeasurementSet) -> None:
    header = {
        "strategy": ms.strategy.value,
        "n": ms.n,
        "lambda": ms.lam,
        "budget": ms.budget,
        "circuit_seed": ms.circuit_seed,
    }
    if ms.family is not None:
        header["family"] = ms.family
    fh.write(json.dumps(header) + "\n")
    for rec in ms.records():
        fh.write(json.dumps({"bits": rec.bits, "bases": rec.bases}) + "\n")


def read_measurements(fh) -> list[MeasurementSet]:
    """Parse one or more header-prefixed measurement blocks."""
    sets = []
    header, bits, bases = None, [], []

    def flush():
        if header is None:
            return
        n = header["n"]
        b = np.array([[int(ch) for ch in s] for s in bits], dtype=np.uint8).reshape(-1, n)
        u = np.array([[BASIS_CODES[ch] for ch in s] for s in bases], dtype=np.uint8).reshape(-1, n)
        sets.append(
            MeasurementSet(
                parse_strategy(header["strategy"]),
                n,
                header["lambda"],
                b,
                u,
                header.get("circuit_seed", 0),
                header.get("family"),
            )
        )

    for lineno, line in enumerate(fh, 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if "strategy" in rec:
            flush()
            header, bits, bases = rec, [], []
            continue
        if header is None:
            raise ValueError(f"line {lineno}: shot record before any header")
        if len(rec.get("bits", "")) != header["n"] or len(rec.get("bases", "")) != header["n"]:
            raise ValueError(f"line {lineno}: record length does not match n={header['n']}")
        bits.append(rec["bits"])
        bases.append(rec["bases"])
    flush()
    return sets
