"""Repeated stratified holdout evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..rng import make_rng
from .logistic import train_logistic
from .svm import train_svm
from .tree import train_forest, train_tree

TRAINERS = {
    "logistic": train_logistic,
    "tree": train_tree,
    "forest": train_forest,
    "svm": train_svm,
}
CLASSIFIERS = tuple(TRAINERS)
_ALIASES = {
    "lr": "logistic",
    "logreg": "logistic",
    "dt": "tree",
    "rf": "forest",
    "random-forest": "forest",
    "decision-tree": "tree",
}
SCALED = frozenset({"logistic", "svm"})


def parse_classifier(name: str) -> str:
    key = str(name).strip().lower()
    key = _ALIASES.get(key, key)
    if key not in TRAINERS:
        raise ValueError(f"unknown classifier {name!r}")
    return key


@dataclass
class EvalResult:
    strategy: str
    classifier: str
    n: int
    accuracies: list = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def std(self) -> float:
        return float(np.std(self.accuracies))

    def to_dict(self):
        return {
            "strategy": self.strategy,
            "classifier": self.classifier,
            "n": self.n,
            "accuracies": list(self.accuracies),
            "mean": self.mean,
            "std": self.std,
        }


def stratified_split(y, train_frac, rng):
    """Train/test row indices with each class split in proportion."""
    train, test = [], []
    for c in np.unique(y):
        rows = np.flatnonzero(y == c)
        rows = rows[rng.permutation(rows.size)]
        n_test = int(round((1.0 - train_frac) * rows.size))
        n_test = min(max(n_test, 1), rows.size - 1)
        test.append(rows[:n_test])
        train.append(rows[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def standardize(train, test):
    mu = train.mean(axis=0)
    sd = train.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    return (train - mu) / sd, (test - mu) / sd


def evaluate(X, y, classifier: str, splits: int = 10, train_frac: float = 0.8, seed: int = 0,
             config=None, strategy: str = "", n: int = 0) -> EvalResult:
    """Test accuracy of ``classifier`` over ``splits`` stratified holdouts.

    Split ``k`` uses the RNG stream (seed, k); logistic and SVM inputs are
    z-scored with training-split statistics, trees see raw features.
    """
    classifier = parse_classifier(classifier)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    labels, counts = np.unique(y, return_counts=True)
    if labels.size < 2:
        raise ValueError("need at least two classes")
    if counts.min() < 2:
        raise ValueError(f"class {labels[np.argmin(counts)]} has fewer than 2 rows")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite values")
    trainer = TRAINERS[classifier]
    accs = []
    for k in range(splits):
        rng = make_rng(seed, k)
        tr, te = stratified_split(y, train_frac, rng)
        Xtr, Xte = X[tr], X[te]
        if classifier in SCALED:
            Xtr, Xte = standardize(Xtr, Xte)
        model = trainer(Xtr, y[tr], config, seed=int(rng.integers(0, 2**63)))
        accs.append(float(np.mean(model.predict(Xte) == y[te])))
    return EvalResult(strategy, classifier, n, accs)
