"""Randomized-Pauli shadow estimators and connected correlators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import MeasurementSet, ShotRecord, Strategy
from .simulator import BASIS_CODES


@dataclass(frozen=True)
class PauliTarget:
    sites: tuple[int, ...]
    letters: str

    def __post_init__(self):
        if len(self.sites) not in (1, 2) or len(self.letters) != len(self.sites):
            raise ValueError("target needs one or two sites with one letter each")
        if len(self.sites) == 2 and self.sites[0] == self.sites[1]:
            raise ValueError("two-site target needs distinct sites")
        if set(self.letters) - set("XYZ"):
            raise ValueError(f"letters must be X/Y/Z, got {self.letters!r}")

    @classmethod
    def single(cls, i: int, letter: str) -> "PauliTarget":
        return cls((i,), letter)

    @classmethod
    def pair(cls, i: int, j: int, letters: str) -> "PauliTarget":
        return cls((i, j), letters)


def _check_sites(t: PauliTarget, n: int):
    for q in t.sites:
        if not 0 <= q < n:
            raise ValueError(f"site {q} out of range for n={n}")


def single_shot_estimate(r: ShotRecord, t: PauliTarget) -> float:
    """3 * (-1)^b_i if the shot measured qubit i in the target's basis, else 0."""
    (i,) = t.sites
    _check_sites(t, len(r.bits))
    if r.bases[i] != t.letters[0]:
        return 0.0
    return 3.0 if r.bits[i] == "0" else -3.0


def pair_shot_estimate(r: ShotRecord, t: PauliTarget) -> float:
    """9 * (-1)^(b_i + b_j) if both bases match, else 0."""
    i, j = t.sites
    _check_sites(t, len(r.bits))
    if r.bases[i] != t.letters[0] or r.bases[j] != t.letters[1]:
        return 0.0
    return 9.0 if r.bits[i] == r.bits[j] else -9.0


def shot_estimates(ms: MeasurementSet, t: PauliTarget) -> np.ndarray:
    """Per-shot shadow estimates of ``t`` as a float array."""
    _check_sites(t, ms.n)
    est = np.ones(len(ms), dtype=np.float64)
    for q, letter in zip(t.sites, t.letters):
        match = ms.bases[:, q] == BASIS_CODES[letter]
        est *= np.where(match, 3.0 * (1.0 - 2.0 * ms.bits[:, q]), 0.0)
    return est


def estimate_expectation(ms: MeasurementSet, t: PauliTarget) -> float:
    """Empirical mean of the per-shot shadow estimates."""
    if len(ms) == 0:
        raise ValueError("empty measurement set")
    return float(shot_estimates(ms, t).mean())


def _fixed_basis_block(ms: MeasurementSet, letter_i: str, letter_j: str) -> np.ndarray:
    if letter_i != letter_j:
        raise ValueError(f"{ms.strategy.value} set cannot estimate mixed correlator {letter_i}{letter_j}")
    allowed = "ZXY" if ms.strategy is Strategy.MULTI_BASIS else "Z"
    if letter_i not in allowed:
        raise ValueError(f"{ms.strategy.value} set has no {letter_i}-basis shots")
    block = ms.block(letter_i)
    if block.shape[0] == 0:
        raise ValueError(f"no {letter_i}-basis shots in set")
    return block


def connected_correlator(ms: MeasurementSet, i: int, j: int, letter_i: str = "Z", letter_j: str = "Z") -> float:
    """Plug-in estimate of <P_i P_j> - <P_i><P_j> from one measurement set."""
    if i == j:
        raise ValueError("connected correlator needs distinct sites")
    if ms.strategy is Strategy.SHADOWS:
        pair = estimate_expectation(ms, PauliTarget.pair(i, j, letter_i + letter_j))
        a = estimate_expectation(ms, PauliTarget.single(i, letter_i))
        b = estimate_expectation(ms, PauliTarget.single(j, letter_j))
        return pair - a * b
    block = _fixed_basis_block(ms, letter_i, letter_j)
    si = 1.0 - 2.0 * block[:, i]
    sj = 1.0 - 2.0 * block[:, j]
    return float((si * sj).mean() - si.mean() * sj.mean())
