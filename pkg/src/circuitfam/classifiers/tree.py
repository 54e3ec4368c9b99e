"""CART decision trees (Gini) and bootstrap random forests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernels.cart import best_split
from ..rng import make_rng


@dataclass
class TreeConfig:
    max_depth: int | None = None


@dataclass
class ForestConfig:
    n_trees: int = 100
    bootstrap: bool = True
    subsample_features: bool = True
    max_depth: int | None = None


class Tree:
    """Array-encoded binary tree; ``feature == -1`` marks a leaf."""

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.int64)

    @property
    def node_count(self):
        return self.feature.shape[0]

    def depth(self):
        depth = np.zeros(self.node_count, dtype=np.int64)
        for k in range(self.node_count):
            if self.feature[k] >= 0:
                depth[self.left[k]] = depth[self.right[k]] = depth[k] + 1
        return int(depth.max())

    def apply(self, X):
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            f = self.feature[node]
            active = f >= 0
            if not active.any():
                return node
            go_left = X[rows, np.where(active, f, 0)] <= self.threshold[node]
            node = np.where(active, np.where(go_left, self.left[node], self.right[node]), node)

    def predict(self, X):
        return self.value[self.apply(X)]


def grow_tree(X, y, n_classes, sample_idx, max_features=None, rng=None, max_depth=None) -> Tree:
    """Grow a tree on rows ``sample_idx`` (duplicates allowed).

    With ``rng`` set, each node scans features in a fresh random order and
    stops after ``max_features`` non-constant ones; otherwise all features are
    scanned in index order. Nodes split until pure or until no feature varies.
    """
    d = X.shape[1]
    if max_features is None:
        max_features = d
    feature, threshold, left, right, value = [], [], [], [], []
    natural = np.arange(d, dtype=np.int64)

    def new_node(idx):
        counts = np.bincount(y[idx], minlength=n_classes)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(int(np.argmax(counts)))
        return len(feature) - 1, counts

    root, counts = new_node(sample_idx)
    stack = [(root, sample_idx, counts, 0)]
    while stack:
        node, idx, counts, depth = stack.pop()
        if np.count_nonzero(counts) <= 1 or (max_depth is not None and depth >= max_depth):
            continue
        order = natural if rng is None else rng.permutation(d).astype(np.int64)
        f, thr, _ = best_split(X, y, idx, order, max_features, n_classes)
        if f < 0:
            continue
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        lnode, lcounts = new_node(li)
        rnode, rcounts = new_node(ri)
        feature[node], threshold[node] = f, thr
        left[node], right[node] = lnode, rnode
        # right pushed first so the left subtree is expanded first
        stack.append((rnode, ri, rcounts, depth + 1))
        stack.append((lnode, li, lcounts, depth + 1))
    return Tree(feature, threshold, left, right, value)


def _prep(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    if y.min() < 0:
        raise ValueError("labels must be non-negative class indices")
    return X, y, int(y.max()) + 1


class TreeModel:
    def __init__(self, tree: Tree):
        self.tree = tree

    def predict(self, X):
        return self.tree.predict(X)


def train_tree(X, y, config: TreeConfig | None = None, seed: int = 0) -> TreeModel:
    config = config or TreeConfig()
    X, y, k = _prep(X, y)
    idx = np.arange(X.shape[0], dtype=np.int64)
    return TreeModel(grow_tree(X, y, k, idx, max_depth=config.max_depth))


class ForestModel:
    def __init__(self, trees, n_classes):
        self.trees = trees
        self.n_classes = n_classes

    def votes(self, X):
        X = np.asarray(X, dtype=np.float64)
        v = np.zeros((X.shape[0], self.n_classes), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for t in self.trees:
            np.add.at(v, (rows, t.predict(X)), 1)
        return v

    def predict(self, X):
        # argmax returns the first maximum: ties go to the lowest class index
        return np.argmax(self.votes(X), axis=1)


def train_forest(X, y, config: ForestConfig | None = None, seed: int = 0) -> ForestModel:
    config = config or ForestConfig()
    X, y, k = _prep(X, y)
    n, d = X.shape
    max_features = math.ceil(math.sqrt(d)) if config.subsample_features else d
    trees = []
    for t in range(config.n_trees):
        rng = make_rng(seed, t)
        if config.bootstrap:
            idx = rng.integers(0, n, size=n).astype(np.int64)
        else:
            idx = np.arange(n, dtype=np.int64)
        trees.append(
            grow_tree(
                X,
                y,
                k,
                idx,
                max_features=max_features,
                rng=rng if config.subsample_features else None,
                max_depth=config.max_depth,
            )
        )
    return ForestModel(trees, k)
