import numpy as np
import pytest

from klscope.codespace import kl_violation, lambda_star, signature_vector
from klscope.optimizer import (
    ConditioningError,
    LossSpec,
    OptimizerConfig,
    gradient,
    jnr_feasibility,
    loss,
    optimize,
    stiefel_map,
)
from klscope.pauli import dense_matrix, enumerate_error_basis, pauli_from_string
from klscope.stabilizer import builtin, codespace_from_stabilizer

np_rng = np.random.default_rng(314159)


def random_theta(m, K):
    return np_rng.standard_normal((m, K)) + 1j * np_rng.standard_normal((m, K))


def test_stiefel_map_fixes_isometry():
    code = codespace_from_stabilizer(builtin("steane"))
    out = stiefel_map(code.basis)
    assert np.abs(out.basis - code.basis).max() <= 1e-13


def test_stiefel_map_scale_invariance():
    theta = random_theta(16, 3)
    a = stiefel_map(theta)
    b = stiefel_map(2.0 * theta)
    assert np.abs(a.basis - b.basis).max() <= 1e-12


def test_stiefel_map_orthonormal_columns():
    for _ in range(5):
        theta = random_theta(32, 4)
        psi = stiefel_map(theta).basis
        assert np.abs(psi.conj().T @ psi - np.eye(4)).max() <= 1e-12


def test_stiefel_map_conditioning_error():
    theta = np.zeros((8, 2), dtype=complex)
    theta[:, 0] = np_rng.standard_normal(8)
    theta[:, 1] = theta[:, 0]
    with pytest.raises(ConditioningError):
        stiefel_map(theta)


def test_loss_examples_steane():
    steane = codespace_from_stabilizer(builtin("steane"))
    basis = enumerate_error_basis(7, 3)
    assert loss(steane.basis, basis, LossSpec("kl_only", mu=1.0)) <= 1e-20
    spec = LossSpec("target_length", mu=1000.0, target_length=0.0)
    assert loss(steane.basis, basis, spec) <= 1e-20


def test_loss_example_shaw_minimize():
    shaw = codespace_from_stabilizer(builtin("shaw623"))
    basis = enumerate_error_basis(6, 3)
    val = loss(shaw.basis, basis, LossSpec("minimize_length", mu=1000.0))
    assert abs(val - 1.0) <= 1e-10


def test_loss_spec_validation():
    with pytest.raises(ValueError):
        LossSpec("bogus")
    with pytest.raises(ValueError):
        LossSpec("kl_only", mu=0.0)
    with pytest.raises(ValueError):
        LossSpec("target_length", mu=1.0)
    with pytest.raises(ValueError):
        LossSpec("target_vector", mu=1.0)


def test_gradient_zero_at_exact_code():
    steane = codespace_from_stabilizer(builtin("steane"))
    basis = enumerate_error_basis(7, 3)
    g = gradient(steane.basis, basis, LossSpec("kl_only", mu=1.0))
    assert np.linalg.norm(g) <= 1e-8


def test_gradient_matches_finite_differences():
    basis = enumerate_error_basis(3, 3)
    specs = [
        LossSpec("kl_only", mu=1.0),
        LossSpec("minimize_length", mu=1000.0),
        LossSpec("maximize_length", mu=1000.0),
        LossSpec("target_length", mu=1000.0, target_length=0.8),
        LossSpec("target_vector", mu=1000.0,
                 target_vector=np.linspace(-0.2, 0.2, len(basis))),
    ]
    h = 1e-5
    for trial in range(20):
        theta = random_theta(8, 2)
        spec = specs[trial % len(specs)]
        g = gradient(theta, basis, spec)
        delta = random_theta(8, 2)
        analytic = float(np.real(np.vdot(g, delta)))
        fd = (loss(theta + h * delta, basis, spec)
              - loss(theta - h * delta, basis, spec)) / (2 * h)
        assert abs(analytic - fd) <= 1e-6 * max(abs(fd), 1e-9 / 1e-6)


def test_gradient_orthogonal_to_scale_directions():
    basis = enumerate_error_basis(3, 3)
    theta = random_theta(8, 2)
    for spec in (LossSpec("kl_only", mu=1.0), LossSpec("minimize_length", mu=1000.0)):
        g = gradient(theta, basis, spec)
        assert abs(np.real(np.vdot(g, theta))) <= 1e-8
        assert abs(np.real(np.vdot(g, 1j * theta))) <= 1e-8


def test_optimize_two_qubit_extremes():
    # K=1 on two qubits: any state is feasible; the squared correlation length
    # spans [0, 2] from Bell states to product states
    basis = enumerate_error_basis(2, 2)
    cfg = OptimizerConfig(seed=1, restarts=6)
    rmin = optimize(2, 1, basis, LossSpec("minimize_length", mu=1000.0), cfg)
    assert rmin.lambda_star ** 2 <= 1e-8
    assert rmin.converged
    rmax = optimize(2, 1, basis, LossSpec("maximize_length", mu=1000.0), cfg)
    assert abs(rmax.lambda_star ** 2 - 2.0) <= 1e-6
    assert rmax.kl_violation <= 1e-10


def test_optimize_result_certified_independently():
    basis = enumerate_error_basis(2, 2)
    cfg = OptimizerConfig(seed=3, restarts=4)
    res = optimize(2, 1, basis, LossSpec("target_length", mu=1000.0, target_length=1.0), cfg)
    assert res.converged
    assert kl_violation(res.code, basis) <= 1e-10
    sig = signature_vector(res.code, basis)
    assert abs(lambda_star(sig) - res.lambda_star) <= 1e-9


def test_optimize_deterministic_given_seed():
    basis = enumerate_error_basis(2, 2)
    spec = LossSpec("target_length", mu=1000.0, target_length=1.0)
    a = optimize(2, 1, basis, spec, OptimizerConfig(seed=11, restarts=3))
    b = optimize(2, 1, basis, spec, OptimizerConfig(seed=11, restarts=3))
    assert np.abs(a.code.basis - b.code.basis).max() == 0
    assert a.final_loss == b.final_loss


def test_optimize_thread_count_stability():
    basis = enumerate_error_basis(2, 2)
    spec = LossSpec("target_length", mu=1000.0, target_length=1.0)
    serial = optimize(2, 1, basis, spec, OptimizerConfig(seed=7, restarts=4, threads=1))
    pooled = optimize(2, 1, basis, spec, OptimizerConfig(seed=7, restarts=4, threads=3))
    lams_a = sorted(s.lambda_sq for s in serial.restart_summaries)
    lams_b = sorted(s.lambda_sq for s in pooled.restart_summaries)
    assert np.abs(np.array(lams_a) - np.array(lams_b)).max() <= 1e-6


def test_momentum_method_monotone_history():
    basis = enumerate_error_basis(2, 2)
    spec = LossSpec("target_length", mu=1000.0, target_length=1.0)
    cfg = OptimizerConfig(seed=2, restarts=1, method="momentum", max_iters=300,
                          record_history=True)
    res = optimize(2, 1, basis, spec, cfg)
    assert res.history
    for phase in set(h[0] for h in res.history):
        losses = [h[2] for h in res.history if h[0] == phase]
        if len(losses) > 1:
            assert np.diff(losses).max() <= 1e-15


def test_lbfgs_history_best_so_far_monotone():
    basis = enumerate_error_basis(2, 2)
    spec = LossSpec("minimize_length", mu=1000.0)
    cfg = OptimizerConfig(seed=2, restarts=1, record_history=True)
    res = optimize(2, 1, basis, spec, cfg)
    assert res.history
    for phase in set(h[0] for h in res.history):
        losses = np.array([h[2] for h in res.history if h[0] == phase])
        best = np.minimum.accumulate(losses)
        assert np.abs(best - np.minimum.accumulate(best)).max() == 0


def test_target_vector_loss_accepts_signature():
    shaw = codespace_from_stabilizer(builtin("shaw623"))
    basis = enumerate_error_basis(6, 3)
    sig = signature_vector(shaw, basis)
    spec = LossSpec("target_vector", mu=1000.0, target_vector=sig)
    assert loss(shaw.basis, basis, spec) <= 1e-20
    # a fresh search against the Shaw signature reproduces lambda* = 1
    res = optimize(6, 2, basis, spec, OptimizerConfig(seed=4, restarts=2))
    assert res.kl_violation <= 1e-10
    assert abs(res.lambda_star - 1.0) <= 1e-6


def test_jnr_disconnected_two_qubit_example():
    ops = [dense_matrix(pauli_from_string(w)) for w in ("XI", "XZ", "YI", "YZ", "ZI")]
    points = jnr_feasibility(ops, 2, OptimizerConfig(seed=5, restarts=25))
    assert len(points) == 2
    signs = set()
    for p in points:
        vals = np.asarray(p.values)
        assert np.abs(vals[:4]).max() <= 1e-8
        assert abs(abs(vals[4]) - 1.0) <= 1e-8
        assert p.residual <= 1e-9
        signs.add(np.sign(vals[4]))
    assert signs == {-1.0, 1.0}
    assert sum(p.hits for p in points) == 25


def test_jnr_rank_one_fills_interval():
    ops = [dense_matrix(pauli_from_string("ZI"))]
    points = jnr_feasibility(ops, 1, OptimizerConfig(seed=9, restarts=40, max_iters=5))
    vals = [p.values[0] for p in points]
    assert min(vals) < -0.5 and max(vals) > 0.5
    assert all(-1 - 1e-9 <= v <= 1 + 1e-9 for v in vals)


def test_jnr_full_rank_trace_average():
    ops = [3.0 * np.eye(4)]
    points = jnr_feasibility(ops, 4, OptimizerConfig(seed=2, restarts=3))
    assert len(points) == 1
    assert abs(points[0].values[0] - 3.0) <= 1e-9
    # a non-scalar operator leaves no feasible tuple at full rank
    ops = [dense_matrix(pauli_from_string("ZI"))]
    assert jnr_feasibility(ops, 4, OptimizerConfig(seed=2, restarts=3)) == []


def test_jnr_validates_input():
    with pytest.raises(ValueError, match="Hermitian"):
        jnr_feasibility([np.array([[0, 1], [0, 0]])], 1,
                        OptimizerConfig(seed=0, restarts=1))
    with pytest.raises(ValueError):
        jnr_feasibility([np.eye(2)], 3, OptimizerConfig(seed=0, restarts=1))
