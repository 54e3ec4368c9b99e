"""Dense statevector simulation, exact Pauli expectations and sampling.

Bit convention: qubit ``q`` is bit ``q`` of the amplitude index (qubit 0 is the
least-significant bit).
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit
from .kernels import statevector as kern
from .rng import make_rng

MAX_QUBITS = int(os.environ.get("CIRCUITFAM_MAX_QUBITS", "24"))

BASIS_CODES = {"Z": 0, "X": 1, "Y": 2}
BASIS_LETTERS = "ZXY"


class SimulationResourceError(MemoryError):
    """Requested statevector exceeds the configured qubit cap."""


@dataclass
class Statevector:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, n: int) -> "Statevector":
        if n > MAX_QUBITS:
            raise SimulationResourceError(
                f"{n} qubits exceeds the statevector cap of {MAX_QUBITS} "
                "(set CIRCUITFAM_MAX_QUBITS to raise it)"
            )
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n, amps)

    def copy(self) -> "Statevector":
        return Statevector(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real * a.real + a.imag * a.imag


class PauliString:
    """Tensor product of single-qubit Paulis; ``letters[q]`` acts on qubit q."""

    __slots__ = ("letters",)

    def __init__(self, letters: str):
        letters = letters.upper()
        if not letters or set(letters) - set("IXYZ"):
            raise ValueError(f"bad Pauli string {letters!r}")
        self.letters = letters

    @classmethod
    def from_sites(cls, n: int, sites: dict) -> "PauliString":
        chars = ["I"] * n
        for q, letter in sites.items():
            if not 0 <= q < n:
                raise ValueError(f"site {q} out of range for n={n}")
            chars[q] = letter
        return cls("".join(chars))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> list[int]:
        return [q for q, c in enumerate(self.letters) if c != "I"]

    def masks(self):
        x = z = 0
        n_y = 0
        for q, c in enumerate(self.letters):
            if c in "XY":
                x |= 1 << q
            if c in "ZY":
                z |= 1 << q
            n_y += c == "Y"
        return x, z, n_y

    def __eq__(self, other):
        return isinstance(other, PauliString) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"PauliString({self.letters!r})"


def run(c: Circuit) -> Statevector:
    """Statevector ``C|0...0>`` for circuit ``c``."""
    c.validate()
    psi = Statevector.zero(c.n_qubits)
    if c.gates:
        kern.apply_gates(psi.amplitudes, *c.to_arrays())
    return psi


def exact_expectation(psi: Statevector, p) -> float:
    """<psi|P|psi> for a Pauli string ``p`` (str or PauliString)."""
    if not isinstance(p, PauliString):
        p = PauliString(p)
    if p.n != psi.n:
        raise ValueError(f"Pauli string acts on {p.n} qubits, state has {psi.n}")
    xmask, zmask, n_y = p.masks()
    if xmask == 0 and zmask == 0:
        # states are unit norm; don't report accumulated rounding as <I>
        return 1.0
    amps = psi.amplitudes
    idx = np.arange(amps.shape[0], dtype=np.int64)
    # P|k> = i^{n_y} (-1)^{popcount(k & zmask)} |k ^ xmask>
    sign = 1.0 - 2.0 * (np.bitwise_count(idx & zmask) & 1)
    val = np.vdot(amps[idx ^ xmask], sign * amps) * (1j**n_y)
    return float(val.real)


def _parse_bases(bases, n):
    if isinstance(bases, str):
        bases = list(bases)
    if len(bases) != n:
        raise ValueError(f"got {len(bases)} bases for {n} qubits")
    out = []
    for b in bases:
        if isinstance(b, str):
            if b.upper() not in BASIS_CODES:
                raise ValueError(f"unknown basis {b!r}")
            out.append(BASIS_CODES[b.upper()])
        else:
            if b not in (0, 1, 2):
                raise ValueError(f"unknown basis code {b!r}")
            out.append(int(b))
    return out


def apply_basis_rotation(psi: Statevector, bases) -> Statevector:
    """Rotate each qubit so that a Z measurement reads out the chosen basis.

    ``bases`` is a per-qubit sequence of "X"/"Y"/"Z" (or codes 1/2/0). The
    input state is left untouched.
    """
    codes = _parse_bases(bases, psi.n)
    out = psi.copy()
    program = kern.rotation_program(codes)
    if program[0].size:
        kern.apply_gates(out.amplitudes, *program)
    return out


def sample_indices(psi: Statevector, shots: int, rng) -> np.ndarray:
    """Outcome indices drawn i.i.d. from |amplitude|^2 using ``rng``."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    u = rng.random(shots)
    return kern.draw_from_cdf(kern.cdf(psi.amplitudes), u)


def indices_to_bits(idx: np.ndarray, n: int) -> np.ndarray:
    """(shots, n) uint8 bit matrix; column q holds qubit q."""
    idx = np.asarray(idx, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.uint8)


def sample(psi: Statevector, shots: int, seed: int) -> list[str]:
    """``shots`` bitstrings; character q of each string is qubit q."""
    bits = indices_to_bits(sample_indices(psi, shots, make_rng(seed)), psi.n)
    return ["".join("01"[b] for b in row) for row in bits]
