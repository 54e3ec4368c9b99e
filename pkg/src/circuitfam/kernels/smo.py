"""SMO solver for the binary soft-margin SVM dual.

Solves  min_a  1/2 a^T Q a - e^T a   s.t.  0 <= a_t <= C,  y^T a = 0
with Q_ts = y_t y_s K_ts, using second-order working-set selection.
"""
import numpy as np

from .. import _accel
from .._accel import njit

TAU = 1e-12


@njit(cache=True, nogil=True)
def _smo_nb(K, y, C, eps, max_iter, track):
    n = y.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    history = np.empty(max_iter + 1 if track else 1)
    n_hist = 0
    it = 0
    while it < max_iter:
        if track:
            obj = 0.0
            for t in range(n):
                obj += alpha[t] * (G[t] - 1.0)
            history[n_hist] = -0.5 * obj
            n_hist += 1
        gmax = -np.inf
        i = -1
        for t in range(n):
            if y[t] > 0:
                if alpha[t] < C and -G[t] > gmax:
                    gmax = -G[t]
                    i = t
            elif alpha[t] > 0 and G[t] > gmax:
                gmax = G[t]
                i = t
        if i < 0:
            break
        gmax2 = -np.inf
        j = -1
        best = np.inf
        for t in range(n):
            if y[t] > 0:
                if alpha[t] > 0:
                    if G[t] > gmax2:
                        gmax2 = G[t]
                    diff = gmax + G[t]
                    if diff > 0:
                        quad = K[i, i] + K[t, t] - 2.0 * K[i, t]
                        if quad <= 0:
                            quad = TAU
                        val = -(diff * diff) / quad
                        if val < best:
                            best = val
                            j = t
            elif alpha[t] < C:
                if -G[t] > gmax2:
                    gmax2 = -G[t]
                diff = gmax - G[t]
                if diff > 0:
                    quad = K[i, i] + K[t, t] - 2.0 * K[i, t]
                    if quad <= 0:
                        quad = TAU
                    val = -(diff * diff) / quad
                    if val < best:
                        best = val
                        j = t
        if gmax + gmax2 < eps or j < 0:
            break
        qij = y[i] * y[j] * K[i, j]
        ai, aj = alpha[i], alpha[j]
        if y[i] != y[j]:
            quad = K[i, i] + K[j, j] + 2.0 * qij
            if quad <= 0:
                quad = TAU
            delta = (-G[i] - G[j]) / quad
            diff = ai - aj
            ni = ai + delta
            nj = aj + delta
            if diff > 0:
                if nj < 0:
                    nj = 0.0
                    ni = diff
            elif ni < 0:
                ni = 0.0
                nj = -diff
            if diff > 0:
                if ni > C:
                    ni = C
                    nj = C - diff
            elif nj > C:
                nj = C
                ni = C + diff
        else:
            quad = K[i, i] + K[j, j] - 2.0 * qij
            if quad <= 0:
                quad = TAU
            delta = (G[i] - G[j]) / quad
            total = ai + aj
            ni = ai - delta
            nj = aj + delta
            if total > C:
                if ni > C:
                    ni = C
                    nj = total - C
            elif nj < 0:
                nj = 0.0
                ni = total
            if total > C:
                if nj > C:
                    nj = C
                    ni = total - C
            elif ni < 0:
                ni = 0.0
                nj = total
        dai = ni - ai
        daj = nj - aj
        alpha[i] = ni
        alpha[j] = nj
        for t in range(n):
            G[t] += y[t] * (y[i] * K[t, i] * dai + y[j] * K[t, j] * daj)
        it += 1
    if track:
        obj = 0.0
        for t in range(n):
            obj += alpha[t] * (G[t] - 1.0)
        history[n_hist] = -0.5 * obj
        n_hist += 1
    return alpha, G, it, history[:n_hist]


def _smo_np(K, y, C, eps, max_iter, track):
    n = y.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    history = []
    diag = np.diag(K).copy()
    pos = y > 0
    it = 0
    while it < max_iter:
        if track:
            history.append(-0.5 * float(np.dot(alpha, G - 1.0)))
        up = np.where(pos, alpha < C, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < C)
        score_up = np.where(up, -y * G, -np.inf)
        i = int(np.argmax(score_up))
        gmax = score_up[i]
        if not np.isfinite(gmax):
            break
        minus_yg = -y * G
        gmax2 = np.max(np.where(low, -minus_yg, -np.inf))
        diff = gmax - minus_yg
        quad = diag[i] + diag - 2.0 * K[i]
        quad = np.where(quad <= 0, TAU, quad)
        cand = low & (diff > 0)
        val = np.where(cand, -(diff * diff) / quad, np.inf)
        j = int(np.argmin(val))
        if gmax + gmax2 < eps or not cand[j]:
            break
        alpha_i, alpha_j = _pair_update(K, y, G, alpha, i, j, C)
        dai = alpha_i - alpha[i]
        daj = alpha_j - alpha[j]
        alpha[i] = alpha_i
        alpha[j] = alpha_j
        G += y * (y[i] * K[:, i] * dai + y[j] * K[:, j] * daj)
        it += 1
    if track:
        history.append(-0.5 * float(np.dot(alpha, G - 1.0)))
    return alpha, G, it, np.asarray(history)


def _pair_update(K, y, G, alpha, i, j, C):
    qij = y[i] * y[j] * K[i, j]
    ai, aj = alpha[i], alpha[j]
    if y[i] != y[j]:
        quad = K[i, i] + K[j, j] + 2.0 * qij
        quad = TAU if quad <= 0 else quad
        delta = (-G[i] - G[j]) / quad
        diff = ai - aj
        ni, nj = ai + delta, aj + delta
        if diff > 0:
            if nj < 0:
                ni, nj = diff, 0.0
        elif ni < 0:
            ni, nj = 0.0, -diff
        if diff > 0:
            if ni > C:
                ni, nj = C, C - diff
        elif nj > C:
            ni, nj = C + diff, C
    else:
        quad = K[i, i] + K[j, j] - 2.0 * qij
        quad = TAU if quad <= 0 else quad
        delta = (G[i] - G[j]) / quad
        total = ai + aj
        ni, nj = ai - delta, aj + delta
        if total > C:
            if ni > C:
                ni, nj = C, total - C
        elif nj < 0:
            ni, nj = total, 0.0
        if total > C:
            if nj > C:
                ni, nj = total - C, C
        elif ni < 0:
            ni, nj = 0.0, total
    return ni, nj


def solve_smo(K, y, C=1.0, eps=1e-3, max_iter=None, track=False):
    """Returns (alpha, gradient, iterations, dual objective history).

    ``y`` holds +1/-1 labels as floats. The history (dual objective
    ``e^T a - 1/2 a^T Q a`` before each step and at exit) is only filled
    when ``track`` is set.
    """
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if max_iter is None:
        max_iter = max(100_000, 100 * y.shape[0])
    if _accel.USE_NUMBA:
        return _smo_nb(K, y, float(C), float(eps), int(max_iter), bool(track))
    return _smo_np(K, y, float(C), float(eps), int(max_iter), bool(track))
