"""Strategy-specific feature vectors and the dataset CSV format."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .measurement import MeasurementSet, Strategy, parse_strategy

# shadow letter pairs in feature order; codes are Z=0, X=1, Y=2
SHADOW_PAIRS = (("zz", 0, 0), ("xx", 1, 1), ("yy", 2, 2), ("xy", 1, 2), ("xz", 1, 0), ("yz", 2, 0))


@dataclass
class FeatureVector:
    strategy: Strategy
    n: int
    values: np.ndarray


def feature_dim(strategy, n: int) -> int:
    strategy = parse_strategy(strategy)
    d_z = (n * n + 3 * n + 4) // 2
    if strategy is Strategy.Z_ONLY:
        return d_z
    if strategy is Strategy.NN:
        return 3 * n + 1
    if strategy is Strategy.MULTI_BASIS:
        return d_z + 2 * n + n * (n - 1)
    return 3 * n * n


def _pairs(n, adjacent=False):
    if adjacent:
        i = np.arange(n - 1)
        return i, i + 1
    return np.triu_indices(n, 1)


def _fixed_block_features(bits: np.ndarray, n: int, adjacent=False):
    """Histogram, marginals, parity bias and connected ZZ-type correlators."""
    m = bits.shape[0]
    if m == 0:
        raise ValueError("empty measurement block")
    weights = bits.sum(axis=1, dtype=np.int64)
    hist = np.bincount(weights, minlength=n + 1) / m
    marg = bits.mean(axis=0, dtype=np.float64)
    parity = np.mean(1.0 - 2.0 * (weights & 1))
    corr = _connected(bits, n, adjacent)
    return hist, marg, parity, corr


def _connected(bits, n, adjacent=False):
    m = bits.shape[0]
    s = 1.0 - 2.0 * bits.astype(np.float64)
    mean = s.mean(axis=0)
    second = (s.T @ s) / m
    i, j = _pairs(n, adjacent)
    return second[i, j] - mean[i] * mean[j]


def _shadow_features(ms: MeasurementSet):
    n = ms.n
    shots = len(ms)
    if shots == 0:
        raise ValueError("empty measurement set")
    s = 3.0 * (1.0 - 2.0 * ms.bits.astype(np.float64))
    est = np.zeros((shots, n, 3))
    for code in range(3):
        est[:, :, code] = np.where(ms.bases == code, s, 0.0)
    est = est.reshape(shots, 3 * n)
    singles = est.mean(axis=0)
    second = (est.T @ est) / shots
    i, j = _pairs(n)
    cols = []
    for _, a, b in SHADOW_PAIRS:
        ia, jb = 3 * i + a, 3 * j + b
        cols.append(second[ia, jb] - singles[ia] * singles[jb])
    corr = np.stack(cols, axis=1).reshape(-1)  # pair-major
    return np.concatenate([singles, corr])


def featurize(ms: MeasurementSet) -> FeatureVector:
    n = ms.n
    if len(ms) == 0:
        raise ValueError("empty measurement set")
    st = ms.strategy
    if st is Strategy.SHADOWS:
        values = _shadow_features(ms)
    elif st in (Strategy.Z_ONLY, Strategy.NN):
        hist, marg, parity, corr = _fixed_block_features(ms.bits, n, adjacent=st is Strategy.NN)
        values = np.concatenate([hist, marg, [parity], corr])
    else:
        hist, marg, parity, corr = _fixed_block_features(ms.block("Z"), n)
        parts = [hist, marg, [parity], corr]
        for letter in "XY":
            block = ms.block(letter)
            if block.shape[0] == 0:
                raise ValueError(f"empty {letter} block; budget too small for multi-basis")
            parts += [block.mean(axis=0, dtype=np.float64), _connected(block, n)]
        values = np.concatenate(parts)
    return FeatureVector(st, n, np.asarray(values, dtype=np.float64))


def feature_names(strategy, n: int) -> list[str]:
    strategy = parse_strategy(strategy)
    if strategy is Strategy.SHADOWS:
        names = [f"{c}{q}" for q in range(n) for c in "zxy"]
        for i, j in zip(*_pairs(n)):
            names += [f"{tag}_{i}_{j}" for tag, _, _ in SHADOW_PAIRS]
        return names
    names = [f"h{w}" for w in range(n + 1)] + [f"m{q}" for q in range(n)] + ["parity"]
    names += [f"zz_{i}_{j}" for i, j in zip(*_pairs(n, strategy is Strategy.NN))]
    if strategy is Strategy.MULTI_BASIS:
        for c in "xy":
            names += [f"m{c}{q}" for q in range(n)]
            names += [f"{c}{c}_{i}_{j}" for i, j in zip(*_pairs(n))]
    return names


def write_dataset(dest, strategy, n: int, X: np.ndarray, y: np.ndarray) -> None:
    """Write a dataset CSV to a path or an open text handle."""
    if hasattr(dest, "write"):
        _write_rows(dest, strategy, n, X, y)
        return
    with open(dest, "w", newline="") as fh:
        _write_rows(fh, strategy, n, X, y)


def _write_rows(fh, strategy, n, X, y):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["label"] + feature_names(strategy, n))
    for label, row in zip(y, X):
        w.writerow([int(label)] + [f"{v:.17g}" for v in row])


def read_dataset(path):
    """Returns (X, y, column names)."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        rows = [row for row in r if row]
    if header[0] != "label":
        raise ValueError(f"{path}: first column must be 'label'")
    y = np.array([int(row[0]) for row in rows], dtype=np.int64)
    X = np.array([[float(v) for v in row[1:]] for row in rows], dtype=np.float64)
    return X.reshape(len(rows), len(header) - 1), y, header[1:]
