"""Best Gini split search for one tree node.

Both variants score a candidate threshold by ``sum_k L_k^2 / |L| +
sum_k R_k^2 / |R|`` (maximized), which is equivalent to minimizing the
weighted child Gini impurity. Integer class counts keep the score
bit-identical across the two implementations; ties keep the first candidate
in (feature order, threshold order).
"""
import numpy as np

from .. import _accel
from .._accel import njit


@njit(cache=True, nogil=True)
def _best_split_nb(X, y, idx, features, max_features, n_classes):
    m = idx.shape[0]
    total = np.zeros(n_classes, dtype=np.int64)
    for s in range(m):
        total[y[idx[s]]] += 1
    vals = np.empty(m, dtype=np.float64)
    left = np.empty(n_classes, dtype=np.int64)
    right = np.empty(n_classes, dtype=np.int64)
    best_score = -1.0
    best_f = -1
    best_thr = 0.0
    visited = 0
    for fi in range(features.shape[0]):
        f = features[fi]
        for s in range(m):
            vals[s] = X[idx[s], f]
        order = np.argsort(vals, kind="mergesort")
        if vals[order[0]] == vals[order[m - 1]]:
            continue
        visited += 1
        sq_l = 0
        sq_r = 0
        for k in range(n_classes):
            left[k] = 0
            right[k] = total[k]
            sq_r += total[k] * total[k]
        for p in range(1, m):
            c = y[idx[order[p - 1]]]
            sq_l += 2 * left[c] + 1
            left[c] += 1
            sq_r -= 2 * right[c] - 1
            right[c] -= 1
            lo = vals[order[p - 1]]
            hi = vals[order[p]]
            if not lo < hi:
                continue
            score = float(sq_l) / float(p) + float(sq_r) / float(m - p)
            if score > best_score:
                best_score = score
                best_f = f
                thr = 0.5 * lo + 0.5 * hi
                if thr >= hi:
                    thr = lo
                best_thr = thr
        if visited >= max_features:
            break
    return best_f, best_thr, best_score


def _best_split_np(X, y, idx, features, max_features, n_classes):
    m = idx.shape[0]
    yl = y[idx]
    onehot = np.zeros((m, n_classes), dtype=np.int64)
    best_score, best_f, best_thr = -1.0, -1, 0.0
    visited = 0
    for f in features:
        vals = X[idx, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        if sv[0] == sv[-1]:
            continue
        visited += 1
        onehot[:] = 0
        onehot[np.arange(m), yl[order]] = 1
        cum = np.cumsum(onehot, axis=0)[:-1]
        rest = cum[-1] + onehot[-1] - cum
        sizes = np.arange(1, m)
        sq_l = (cum * cum).sum(axis=1)
        sq_r = (rest * rest).sum(axis=1)
        score = sq_l.astype(np.float64) / sizes.astype(np.float64) + sq_r.astype(np.float64) / (
            m - sizes
        ).astype(np.float64)
        valid = sv[:-1] < sv[1:]
        score = np.where(valid, score, -np.inf)
        p = int(np.argmax(score))
        if score[p] > best_score:
            best_score = float(score[p])
            best_f = int(f)
            lo, hi = sv[p], sv[p + 1]
            thr = 0.5 * lo + 0.5 * hi
            best_thr = float(lo if thr >= hi else thr)
        if visited >= max_features:
            break
    return best_f, best_thr, best_score


def best_split(X, y, idx, features, max_features, n_classes):
    """(feature, threshold, score) of the best split, feature -1 if none.

    Features are scanned in the given order, skipping ones constant on the
    node, until ``max_features`` non-constant features have been scored.
    Samples with ``x <= threshold`` go left.
    """
    if _accel.USE_NUMBA:
        f, thr, score = _best_split_nb(X, y, idx, features, max_features, n_classes)
        return int(f), float(thr), float(score)
    return _best_split_np(X, y, idx, features, max_features, n_classes)
