"""Gate kernels on dense statevectors (qubit 0 = least-significant index bit).

Gate codes: 0 H, 1 S, 2 T, 3 CNOT (q0 control, q1 target), 4 CZ, 5 RZ, 6 Sdg.
RZ(theta) = diag(exp(-i theta/2), exp(+i theta/2)).
"""
import math

import numpy as np

from .. import _accel
from .._accel import njit

INV_SQRT2 = 1.0 / math.sqrt(2.0)
PHASE_S = 1j
PHASE_T = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
PHASE_SDG = -1j

H, S, T, CNOT, CZ, RZ, SDG = range(7)


@njit(cache=True, nogil=True)
def _apply_gates_nb(state, codes, q0, q1, angles):
    dim = state.shape[0]
    half = dim >> 1
    for k in range(codes.shape[0]):
        code = codes[k]
        a = q0[k]
        step = 1 << a
        low = step - 1
        if code == 0:
            for i in range(half):
                i0 = ((i >> a) << (a + 1)) | (i & low)
                i1 = i0 | step
                x = state[i0]
                y = state[i1]
                state[i0] = (x + y) * INV_SQRT2
                state[i1] = (x - y) * INV_SQRT2
        elif code == 1 or code == 2 or code == 6:
            if code == 1:
                ph = PHASE_S
            elif code == 2:
                ph = PHASE_T
            else:
                ph = PHASE_SDG
            for i in range(half):
                i1 = (((i >> a) << (a + 1)) | (i & low)) | step
                state[i1] = state[i1] * ph
        elif code == 5:
            th = 0.5 * angles[k]
            p0 = complex(math.cos(th), -math.sin(th))
            p1 = complex(math.cos(th), math.sin(th))
            for i in range(half):
                i0 = ((i >> a) << (a + 1)) | (i & low)
                state[i0] = state[i0] * p0
                state[i0 | step] = state[i0 | step] * p1
        elif code == 3:
            tstep = 1 << q1[k]
            for i in range(dim):
                if (i & step) and not (i & tstep):
                    j = i | tstep
                    x = state[i]
                    state[i] = state[j]
                    state[j] = x
        elif code == 4:
            mask = step | (1 << q1[k])
            for i in range(dim):
                if (i & mask) == mask:
                    state[i] = -state[i]
    return state


def _apply_gates_np(state, codes, q0, q1, angles):
    dim = state.shape[0]
    for k in range(codes.shape[0]):
        code = int(codes[k])
        a = int(q0[k])
        if code in (H, S, T, SDG, RZ):
            v = state.reshape(dim >> (a + 1), 2, 1 << a)
            if code == H:
                x = v[:, 0, :].copy()
                y = v[:, 1, :]
                v[:, 0, :] = (x + y) * INV_SQRT2
                v[:, 1, :] = (x - y) * INV_SQRT2
            elif code == RZ:
                th = 0.5 * float(angles[k])
                v[:, 0, :] *= complex(math.cos(th), -math.sin(th))
                v[:, 1, :] *= complex(math.cos(th), math.sin(th))
            else:
                v[:, 1, :] *= {S: PHASE_S, T: PHASE_T, SDG: PHASE_SDG}[code]
            continue
        b = int(q1[k])
        hi, lo = max(a, b), min(a, b)
        v = state.reshape(dim >> (hi + 1), 2, 1 << (hi - lo - 1), 2, 1 << lo)
        if code == CZ:
            v[:, 1, :, 1, :] *= -1
        elif a == hi:
            tmp = v[:, 1, :, 0, :].copy()
            v[:, 1, :, 0, :] = v[:, 1, :, 1, :]
            v[:, 1, :, 1, :] = tmp
        else:
            tmp = v[:, 0, :, 1, :].copy()
            v[:, 0, :, 1, :] = v[:, 1, :, 1, :]
            v[:, 1, :, 1, :] = tmp
    return state


def apply_gates(state, codes, q0, q1, angles):
    """Apply a gate list in place; returns ``state``."""
    if _accel.USE_NUMBA:
        return _apply_gates_nb(state, codes, q0, q1, angles)
    return _apply_gates_np(state, codes, q0, q1, angles)


def rotation_program(bases):
    """Gate arrays mapping per-qubit measurement bases (0 Z, 1 X, 2 Y) to Z.

    X is rotated by H. Y is rotated by Sdg followed by H, i.e. the operator
    V = H . Sdg, which satisfies V Y V^dagger = Z.
    """
    codes, qubits = [], []
    for q, b in enumerate(bases):
        if b == 1:
            codes.append(H)
            qubits.append(q)
        elif b == 2:
            codes += [SDG, H]
            qubits += [q, q]
    m = len(codes)
    return (
        np.asarray(codes, dtype=np.int64),
        np.asarray(qubits, dtype=np.int64),
        np.full(m, -1, dtype=np.int64),
        np.zeros(m, dtype=np.float64),
    )


@njit(cache=True, nogil=True)
def _cdf_nb(state):
    dim = state.shape[0]
    cdf = np.empty(dim, dtype=np.float64)
    acc = 0.0
    for i in range(dim):
        z = state[i]
        acc += z.real * z.real + z.imag * z.imag
        cdf[i] = acc
    return cdf


def _cdf_np(state):
    return np.cumsum(state.real * state.real + state.imag * state.imag)


def cdf(state):
    """Cumulative outcome probabilities (unnormalized)."""
    if _accel.USE_NUMBA:
        return _cdf_nb(state)
    return _cdf_np(state)


def draw_from_cdf(cdf_arr, u):
    """Inverse-CDF draw of outcome indices for uniforms ``u`` in [0, 1)."""
    idx = np.searchsorted(cdf_arr, u * cdf_arr[-1], side="right")
    return np.minimum(idx, cdf_arr.shape[0] - 1)


@njit(cache=True, nogil=True)
def _rotated_outcomes_nb(state, rows, order, starts, u):
    n = rows.shape[1]
    out = np.empty(u.shape[0], dtype=np.int64)
    work = np.empty_like(state)
    dim = state.shape[0]
    half = dim >> 1
    for r in range(rows.shape[0]):
        work[:] = state
        for q in range(n):
            b = rows[r, q]
            if b == 0:
                continue
            step = 1 << q
            low = step - 1
            if b == 2:
                for i in range(half):
                    i1 = (((i >> q) << (q + 1)) | (i & low)) | step
                    work[i1] = work[i1] * PHASE_SDG
            for i in range(half):
                i0 = ((i >> q) << (q + 1)) | (i & low)
                i1 = i0 | step
                x = work[i0]
                y = work[i1]
                work[i0] = (x + y) * INV_SQRT2
                work[i1] = (x - y) * INV_SQRT2
        c = _cdf_nb(work)
        total = c[dim - 1]
        for s in range(starts[r], starts[r + 1]):
            t = order[s]
            k = np.searchsorted(c, u[t] * total, side="right")
            if k > dim - 1:
                k = dim - 1
            out[t] = k
    return out


def _rotated_outcomes_np(state, rows, order, starts, u):
    out = np.empty(u.shape[0], dtype=np.int64)
    for r in range(rows.shape[0]):
        work = state.copy()
        _apply_gates_np(work, *rotation_program(rows[r]))
        shots = order[starts[r] : starts[r + 1]]
        out[shots] = draw_from_cdf(_cdf_np(work), u[shots])
    return out


def rotated_outcomes(state, rows, order, starts, u):
    """Outcomes for shots grouped by basis assignment.

    ``rows[r]`` is a per-qubit basis assignment; the shots using it are
    ``order[starts[r]:starts[r+1]]`` and shot ``t`` consumes uniform ``u[t]``.
    """
    if _accel.USE_NUMBA:
        return _rotated_outcomes_nb(state, rows, order, starts, u)
    return _rotated_outcomes_np(state, rows, order, starts, u)
