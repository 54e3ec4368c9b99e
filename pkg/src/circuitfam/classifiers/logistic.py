"""Multinomial (softmax) logistic regression with an L2 penalty, fit by L-BFGS."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp


@dataclass
class LogisticConfig:
    l2: float = 1.0
    max_iter: int = 1000
    gtol: float = 1e-6


def loss_and_grad(params, X, Y, l2):
    """Summed cross-entropy + l2/2 ||W||^2 (bias unpenalized) and its gradient.

    ``params`` packs W (K x d) row-major followed by b (K). ``Y`` is one-hot.
    """
    n, d = X.shape
    k = Y.shape[1]
    W = params[: k * d].reshape(k, d)
    b = params[k * d :]
    Z = X @ W.T + b
    lse = logsumexp(Z, axis=1)
    loss = float(np.sum(lse - np.sum(Y * Z, axis=1))) + 0.5 * l2 * float(np.sum(W * W))
    P = np.exp(Z - lse[:, None])
    D = P - Y
    gW = D.T @ X + l2 * W
    gb = D.sum(axis=0)
    return loss, np.concatenate([gW.ravel(), gb])


class LogisticModel:
    def __init__(self, W, b, classes):
        self.W = W
        self.b = b
        self.classes = classes

    def decision_function(self, X):
        return np.asarray(X, dtype=np.float64) @ self.W.T + self.b

    def predict_proba(self, X):
        Z = self.decision_function(X)
        return np.exp(Z - logsumexp(Z, axis=1)[:, None])

    def predict(self, X):
        return self.classes[np.argmax(self.decision_function(X), axis=1)]


def train_logistic(X, y, config: LogisticConfig | None = None, seed: int = 0) -> LogisticModel:
    config = config or LogisticConfig()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite values")
    classes = np.unique(y)
    if classes.size < 2:
        raise ValueError("logistic regression needs at least two classes")
    Y = (y[:, None] == classes[None, :]).astype(np.float64)
    k, d = classes.size, X.shape[1]
    res = minimize(
        loss_and_grad,
        np.zeros(k * d + k),
        args=(X, Y, config.l2),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": config.max_iter, "gtol": config.gtol},
    )
    return LogisticModel(res.x[: k * d].reshape(k, d), res.x[k * d :], classes)
