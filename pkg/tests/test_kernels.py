"""The numba and pure-numpy kernel paths must agree."""
import numpy as np
import pytest

from circuitfam import _accel
from circuitfam.circuits import Family, generate_circuit
from circuitfam.kernels import cart, smo
from circuitfam.kernels import statevector as sv
from circuitfam.measurement import measure_shadows
from circuitfam.simulator import run

pytestmark = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def both(monkeypatch, fn):
    monkeypatch.setattr(_accel, "USE_NUMBA", True)
    a = fn()
    monkeypatch.setattr(_accel, "USE_NUMBA", False)
    b = fn()
    return a, b


@pytest.mark.parametrize("family", list(Family))
def test_gate_kernels_agree(monkeypatch, family):
    c = generate_circuit(family, 6, 1000, seed=21)
    a, b = both(monkeypatch, lambda: run(c).amplitudes)
    assert np.allclose(a, b, atol=1e-12)


def test_cdf_agrees(monkeypatch):
    psi = run(generate_circuit(Family.CLIFFORD_T, 7, 300, seed=4))
    a, b = both(monkeypatch, lambda: sv.cdf(psi.amplitudes))
    assert np.allclose(a, b, atol=1e-13)


def test_shadow_sampling_agrees(monkeypatch):
    c = generate_circuit(Family.IQP, 5, 200, seed=8)
    a, b = both(monkeypatch, lambda: measure_shadows(c, 16, seed=3))
    assert np.array_equal(a.bases, b.bases)
    assert np.array_equal(a.bits, b.bits)


def test_best_split_agrees(monkeypatch):
    rng = np.random.default_rng(0)
    X = np.round(rng.normal(size=(200, 7)), 1)
    X[:, 3] = 1.0  # constant column is skipped
    y = rng.integers(0, 3, 200)
    idx = rng.integers(0, 200, 150).astype(np.int64)
    for max_features in (1, 3, 7):
        feats = rng.permutation(7).astype(np.int64)
        a, b = both(monkeypatch, lambda: cart.best_split(X, y, idx, feats, max_features, 3))
        assert a[0] == b[0] and a[1] == b[1]
        assert a[2] == pytest.approx(b[2], rel=1e-12)


def test_smo_agrees(monkeypatch):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(80, 4))
    y = np.where(X[:, 0] + 0.3 * rng.normal(size=80) > 0, 1.0, -1.0)
    K = np.exp(-0.25 * ((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    a, b = both(monkeypatch, lambda: smo.solve_smo(K, y, 1.0, 1e-3, None, True))
    assert a[2] == b[2]
    assert np.allclose(a[0], b[0], atol=1e-10)
    assert np.allclose(a[3], b[3], atol=1e-9)


def test_backend_name(monkeypatch):
    monkeypatch.setattr(_accel, "USE_NUMBA", False)
    assert _accel.backend_name() == "numpy"
    monkeypatch.setattr(_accel, "USE_NUMBA", True)
    assert _accel.backend_name() == "numba"
