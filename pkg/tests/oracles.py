"""Independent reference implementations used only by the tests."""
import numpy as np

from circuitfam.circuits import Circuit, GateKind

I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j])
T = np.diag([1, np.exp(1j * np.pi / 4)])


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def embed(op, q, n):
    """Single-qubit ``op`` on qubit q (qubit 0 = least-significant index bit)."""
    out = np.array([[1.0 + 0j]])
    for k in reversed(range(n)):
        out = np.kron(out, op if k == q else I2)
    return out


def two_qubit_matrix(kind, a, b, n):
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        ba, bb = (k >> a) & 1, (k >> b) & 1
        if kind is GateKind.CNOT:
            m[k ^ (ba << b), k] = 1.0
        else:
            m[k, k] = -1.0 if ba and bb else 1.0
    return m


def gate_matrix(g, n):
    if g.kind is GateKind.CNOT or g.kind is GateKind.CZ:
        return two_qubit_matrix(g.kind, g.qubits[0], g.qubits[1], n)
    single = {GateKind.H: H, GateKind.S: S, GateKind.T: T}
    op = rz(g.angle) if g.kind is GateKind.RZ else single[g.kind]
    return embed(op, g.qubits[0], n)


def dense_state(c: Circuit):
    n = c.n_qubits
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for g in c.gates:
        psi = gate_matrix(g, n) @ psi
    return psi


PAULI = {
    "I": I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0 + 0j, -1.0]),
}


def dense_pauli(letters):
    n = len(letters)
    out = np.array([[1.0 + 0j]])
    for q in reversed(range(n)):
        out = np.kron(out, PAULI[letters[q]])
    return out


def heisenberg_z_expectation(c: Circuit, sites):
    """<0|U^dag P U|0> for a Z-type P via tableau conjugation through a Clifford circuit.

    The Pauli is tracked as (x, z, sign) bit vectors and pulled back through
    the gates in reverse order. U^dag P U for S is S^3 P S^3^dag.
    """
    n = c.n_qubits
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for q in sites:
        z[q] = 1
    sign = 0

    def h(q):
        nonlocal sign
        sign ^= int(x[q] & z[q])
        x[q], z[q] = z[q], x[q]

    def s(q):
        nonlocal sign
        sign ^= int(x[q] & z[q])
        z[q] ^= x[q]

    def cnot(a, b):
        nonlocal sign
        sign ^= int(x[a] & z[b] & (x[b] ^ z[a] ^ 1))
        x[b] ^= x[a]
        z[a] ^= z[b]

    for g in reversed(c.gates):
        if g.kind is GateKind.H:
            h(g.qubits[0])
        elif g.kind is GateKind.S:
            for _ in range(3):
                s(g.qubits[0])
        elif g.kind is GateKind.CNOT:
            cnot(*g.qubits)
        else:
            raise ValueError(f"not a Clifford gate: {g.kind}")
    if x.any():
        return 0.0
    return -1.0 if sign else 1.0
