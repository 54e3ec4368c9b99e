import io
import math

import numpy as np
import pytest

import oracles
from circuitfam.circuits import Circuit, Family, Gate, GateKind
from circuitfam.shadows import PauliTarget
from circuitfam.simulator import PauliString, exact_expectation, run
from circuitfam.theory import (
    DIAGONAL_POOL,
    MU,
    NON_DIAGONAL_POOL,
    AlphaCircuitModel,
    bridge_bound,
    bridge_bound_check,
    iqp_frame_check,
    offdiag_decay_curve,
    sample_alpha_circuit,
    strip_final_hadamards,
    variance_ratio,
    variance_report,
    write_check_csv,
)

BELL = Circuit(2, None, [Gate(GateKind.H, (0,)), Gate(GateKind.CNOT, (0, 1))])
ZERO_PLUS = Circuit(2, None, [Gate(GateKind.H, (1,))])


def sample_gate(kind):
    if kind in (GateKind.CZ, GateKind.CNOT):
        return Gate(kind, (0, 1))
    return Gate(kind, (0,), 0.7 if kind is GateKind.RZ else None)


def commutes_with_all_z(kind):
    g = oracles.gate_matrix(sample_gate(kind), 2)
    zs = [oracles.dense_pauli(p) for p in ("ZI", "IZ")]
    return all(np.allclose(g @ z, z @ g) for z in zs)


def test_pools_partition_by_z_commutation():
    assert set(DIAGONAL_POOL) | set(NON_DIAGONAL_POOL) == set(GateKind)
    assert not set(DIAGONAL_POOL) & set(NON_DIAGONAL_POOL)
    assert all(commutes_with_all_z(k) for k in DIAGONAL_POOL)
    assert not any(commutes_with_all_z(k) for k in NON_DIAGONAL_POOL)


@pytest.mark.parametrize("alpha,pool", [(1.0, DIAGONAL_POOL), (0.0, NON_DIAGONAL_POOL)])
def test_alpha_extremes(alpha, pool):
    c = sample_alpha_circuit(AlphaCircuitModel(4, 500, alpha, seed=1))
    assert len(c.gates) == 500
    assert {g.kind for g in c.gates} <= set(pool)
    c.validate()


def test_diagonal_fraction():
    alpha, N = 0.3, 10_000
    c = sample_alpha_circuit(AlphaCircuitModel(3, N, alpha, seed=2))
    frac = sum(g.kind in DIAGONAL_POOL for g in c.gates) / N
    assert abs(frac - alpha) < 3 * math.sqrt(alpha * (1 - alpha) / N)


def test_model_validation():
    with pytest.raises(ValueError):
        AlphaCircuitModel(4, 10, 1.5)
    with pytest.raises(ValueError):
        AlphaCircuitModel(1, 10, 0.5)


def test_diagonal_circuits_keep_z_correlators():
    for seed in range(5):
        psi = run(sample_alpha_circuit(AlphaCircuitModel(4, 60, 1.0, seed)))
        assert exact_expectation(psi, "ZZII") == pytest.approx(1.0, abs=1e-12)
        assert exact_expectation(psi, "ZIZZ") == pytest.approx(1.0, abs=1e-12)


def test_decay_rejects_z_targets():
    with pytest.raises(ValueError):
        offdiag_decay_curve(4, 10, [0.0], PauliTarget.pair(0, 1, "ZZ"), 5, 0)


def test_decay_zero_gates_is_exactly_zero():
    rows = offdiag_decay_curve(4, 0, [0.0, 0.5], PauliTarget.pair(0, 1, "XX"), 10, 0)
    assert [r["mean"] for r in rows] == [0.0, 0.0]
    assert all(r["bound"] == 2.0 for r in rows)


def test_decay_curve_shape():
    rows = offdiag_decay_curve(3, 20, [0.0, 1.0], PauliTarget.pair(0, 1, "XZ"), 40, 5)
    assert [r["alpha"] for r in rows] == [0.0, 1.0]
    # alpha = 1 keeps the all-zero state: any X-containing target has zero mean
    assert rows[1]["mean"] == pytest.approx(0.0, abs=1e-12)
    assert 0.0 <= rows[0]["mean"] <= 1.0


def test_bridge_bound_values():
    assert bridge_bound(0.0, 20) == pytest.approx(1 / 9)
    assert bridge_bound(1.0, 20) == 1.0
    assert MU == pytest.approx(1 / 3)
    a = np.linspace(0, 1, 11)
    assert np.all(np.diff([bridge_bound(x, 5) for x in a]) >= 0)


def test_bridge_fully_diagonal_is_exact():
    r = bridge_bound_check(4, 20, 1.0, 30, seed=3)
    assert r["mean"] == pytest.approx(1.0, abs=1e-12)
    assert r["se"] == pytest.approx(0.0, abs=1e-12)
    assert r["bound"] == 1.0
    with pytest.raises(ValueError):
        bridge_bound_check(4, 20, 0.5, 3, seed=1, site=3)


@pytest.mark.slow
def test_bridge_bound_holds_at_high_alpha():
    r = bridge_bound_check(4, 20, 0.9, 2000, seed=17)
    assert r["mean"] >= r["bound"] - 2 * r["se"]


def test_variance_ratio_grid():
    xs = np.linspace(0, 1, 2001, endpoint=False)
    assert all(variance_ratio(x) >= 9 for x in xs)
    assert variance_ratio(0.0) == 9.0
    assert variance_ratio(0.5) == pytest.approx(17.0)
    assert math.isinf(variance_ratio(1.0))


def test_variance_report_product_state():
    rep = variance_report(ZERO_PLUS, 0, 1, 100_000, seed=1)
    assert rep.exact_zz == pytest.approx(0.0, abs=1e-12)
    assert (rep.var_z_theory, rep.var_s_theory, rep.ratio_theory) == (1.0, 9.0, 9.0)
    assert abs(rep.var_z - 1.0) <= 4 * rep.var_z_se + 1e-12
    assert abs(rep.var_s - 9.0) <= 4 * rep.var_s_se


def test_variance_report_bell_state():
    rep = variance_report(BELL, 0, 1, 20_000, seed=2)
    assert rep.exact_zz == pytest.approx(1.0)
    assert rep.var_z_theory == pytest.approx(0.0, abs=1e-12)
    assert rep.var_s_theory == pytest.approx(8.0)
    assert math.isinf(rep.ratio_theory)
    assert rep.var_z == 0.0 and math.isinf(rep.ratio)
    d = rep.to_dict()
    assert d["ratio_theory"] == "inf" and d["ratio"] == "inf"
    with pytest.raises(ValueError):
        variance_report(BELL, 1, 1, 10, seed=0)


def test_iqp_frame_identity():
    rows = iqp_frame_check(4, 200, 5, seed=3)
    assert len(rows) == 5
    assert all(r["max_abs_diff"] <= 1e-10 for r in rows)


def test_strip_final_hadamards():
    c = Circuit(2, Family.IQP, [Gate(GateKind.H, (0,)), Gate(GateKind.H, (1,)),
                                Gate(GateKind.T, (0,)), Gate(GateKind.H, (0,)), Gate(GateKind.H, (1,))])
    stripped = strip_final_hadamards(c)
    assert [g.kind for g in stripped.gates] == [GateKind.H, GateKind.H, GateKind.T]
    with pytest.raises(ValueError):
        strip_final_hadamards(BELL)


def test_check_csv():
    buf = io.StringIO()
    write_check_csv(buf, [{"check": "bridge", "point": 0.5, "empirical": 0.2, "se": 0.01,
                           "theory": 0.11, "pass": True, "extra": 1}],
                    ["check", "point", "empirical", "se", "theory", "pass"])
    assert buf.getvalue() == "check,point,empirical,se,theory,pass\nbridge,0.5,0.2,0.01,0.11,True\n"


def test_exact_oracle_agrees_with_pauli_string_on_alpha_circuits():
    c = sample_alpha_circuit(AlphaCircuitModel(3, 30, 0.5, seed=4))
    psi = oracles.dense_state(c)
    p = PauliString("XIY")
    want = np.vdot(psi, oracles.dense_pauli("XIY") @ psi).real
    assert exact_expectation(run(c), p) == pytest.approx(want, abs=1e-12)
