"""RBF-kernel soft-margin SVM, one-vs-one over class pairs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..kernels.smo import solve_smo


@dataclass
class SVMConfig:
    C: float = 1.0
    gamma: float | None = None  # None: 1 / (d * mean feature variance)
    tol: float = 1e-3
    max_iter: int | None = None


def rbf_kernel(A, B, gamma):
    sa = np.einsum("ij,ij->i", A, A)
    sb = np.einsum("ij,ij->i", B, B)
    d2 = np.maximum(sa[:, None] + sb[None, :] - 2.0 * (A @ B.T), 0.0)
    return np.exp(-gamma * d2)


def default_gamma(X):
    var = float(np.var(X, axis=0).mean())
    return 1.0 / (X.shape[1] * var) if var > 0 else 1.0


@dataclass
class BinarySVM:
    support: np.ndarray
    coef: np.ndarray  # alpha_t * y_t
    rho: float
    iterations: int
    history: np.ndarray

    def decision(self, K_test_support):
        return K_test_support @ self.coef - self.rho


def _rho(alpha, G, y, C):
    yg = y * G
    at_upper = alpha >= C
    at_lower = alpha <= 0
    free = ~(at_upper | at_lower)
    if free.any():
        return float(yg[free].mean())
    ub_mask = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lb_mask = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yg[ub_mask].min() if ub_mask.any() else np.inf
    lb = yg[lb_mask].max() if lb_mask.any() else -np.inf
    return float((ub + lb) / 2)


def fit_binary(K, y, C=1.0, tol=1e-3, max_iter=None, track=False) -> BinarySVM:
    alpha, G, it, hist = solve_smo(K, y, C, tol, max_iter, track)
    sv = np.flatnonzero(alpha > 0)
    return BinarySVM(sv, alpha[sv] * y[sv], _rho(alpha, G, y, C), int(it), hist)


class SVMModel:
    def __init__(self, X, classes, gamma, machines):
        self.X = X
        self.classes = classes
        self.gamma = gamma
        self.machines = machines  # {(a, b): (row indices, BinarySVM)}

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        K = rbf_kernel(X, self.X, self.gamma)
        votes = np.zeros((X.shape[0], self.classes.size), dtype=np.int64)
        for (a, b), (rows, m) in self.machines.items():
            dec = m.decision(K[:, rows[m.support]])
            win = np.where(dec > 0, a, b)
            np.add.at(votes, (np.arange(X.shape[0]), win), 1)
        return self.classes[np.argmax(votes, axis=1)]


def train_svm(X, y, config: SVMConfig | None = None, seed: int = 0) -> SVMModel:
    config = config or SVMConfig()
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    classes = np.unique(y)
    gamma = config.gamma if config.gamma is not None else default_gamma(X)
    K_all = rbf_kernel(X, X, gamma)
    machines = {}
    for a, b in combinations(range(classes.size), 2):
        rows = np.flatnonzero((y == classes[a]) | (y == classes[b]))
        yy = np.where(y[rows] == classes[a], 1.0, -1.0)
        m = fit_binary(K_all[np.ix_(rows, rows)], yy, config.C, config.tol, config.max_iter)
        machines[(a, b)] = (rows, m)
    return SVMModel(X, classes, gamma, machines)
