"""Penalty-based code search over the Stiefel manifold.

Candidate bases are parameterized by the polar map f(theta) =
theta (theta^dag theta)^{-1/2}; the losses combine the KL residual with a
penalty weight mu and a length objective (minimize, maximize, hit a target
length, or hit a target vector).  Gradients are analytic: the chain rule
runs through the eigendecomposition of the K x K Gram matrix.  Each restart
descends with L-BFGS (gradient-only quasi-Newton; a momentum + backtracking
scheme is available as ``method="momentum"``), with the penalty weight
escalated in stages so converged points meet the KL tolerance instead of
the O(1/mu^2) single-stage penalty floor.
"""

import os
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.sparse

from .codespace import (
    CodeSubspace,
    kl_violation as codespace_kl_violation,
    signature_vector,
)
from .pauli import ErrorBasis

LOSS_KINDS = ("kl_only", "minimize_length", "maximize_length", "target_length", "target_vector")

STATIONARY_GRAD_NORM = 1e-7


class ConditioningError(ValueError):
    """theta is too close to singular for the polar map."""


@dataclass(frozen=True)
class LossSpec:
    kind: str
    mu: float = 1000.0
    target_length: float | None = None
    target_vector: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in LOSS_KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.kind == "target_length" and self.target_length is None:
            raise ValueError("target_length loss needs a target length")
        if self.kind == "target_vector":
            if self.target_vector is None:
                raise ValueError("target_vector loss needs a target vector")
            tv = self.target_vector
            if hasattr(tv, "components"):  # accept a SignatureVector
                tv = tv.components
            v = np.array(tv, dtype=float)
            v.setflags(write=False)
            object.__setattr__(self, "target_vector", v)


@dataclass(frozen=True)
class OptimizerConfig:
    seed: int = 0
    restarts: int = 50
    max_iters: int = 2000
    kl_tol: float = 1e-10
    grad_tol: float = 1e-9
    method: str = "lbfgs"  # or "momentum"
    momentum: float = 0.9
    step0: float = 1.0
    armijo: float = 1e-4
    step_grow: float = 1.3
    step_shrink: float = 0.5
    mu_stages: tuple = (1.0, 1e3, 1e6)
    loss_floor: float = 1e-26
    stop_on_loss: float | None = None  # end restarts early once reached
    threads: int | None = None
    record_history: bool = False


@dataclass(frozen=True)
class RestartSummary:
    seed_index: int
    final_loss: float
    kl_violation: float
    lambda_sq: float
    iterations: int
    grad_norm: float  # stationarity of the last escalation stage


@dataclass
class OptimizationResult:
    code: CodeSubspace
    kl_violation: float
    lambda_star: float
    final_loss: float
    iterations: int
    restarts_used: int
    converged: bool
    wall_time_ms: int
    restart_summaries: list = field(default_factory=list)
    history: list | None = None


class _OperatorStack:
    """Stack of Hermitian operators applied jointly to an isometry."""

    n_ops: int
    dim: int

    def apply(self, psi):
        """Return the (n_ops, dim, K) stack of O_a psi."""
        raise NotImplementedError


class _PauliStack(_OperatorStack):
    """Signed-permutation Pauli words as one sparse (n_ops*dim, dim) matrix."""

    def __init__(self, basis: ErrorBasis):
        perms, amps = basis.action
        self.n_ops, self.dim = perms.shape
        rows = np.arange(self.n_ops * self.dim)
        self.matrix = scipy.sparse.csr_matrix(
            (amps.ravel(), (rows, perms.ravel())),
            shape=(self.n_ops * self.dim, self.dim),
        )

    def apply(self, psi):
        return (self.matrix @ psi).reshape(self.n_ops, self.dim, psi.shape[1])


class _DenseStack(_OperatorStack):
    def __init__(self, operators):
        mats = np.stack([np.asarray(op, dtype=complex) for op in operators])
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise ValueError("operators must be square matrices of equal dimension")
        herm_dev = np.abs(mats - mats.conj().transpose(0, 2, 1)).max()
        if herm_dev > 1e-12:
            raise ValueError(f"operators must be Hermitian (deviation {herm_dev:.2e})")
        self.n_ops, self.dim = mats.shape[0], mats.shape[1]
        self.mats = mats

    def apply(self, psi):
        return np.matmul(self.mats, psi)


def _as_stack(ops):
    if isinstance(ops, _OperatorStack):
        return ops
    if isinstance(ops, ErrorBasis):
        return _PauliStack(ops)
    return _DenseStack(ops)


def _polar(theta):
    """Polar factor and the pieces needed for the chain rule."""
    S = theta.conj().T @ theta
    lam, U = np.linalg.eigh(S)
    if lam[0] <= 0 or np.sqrt(lam[0]) < 1e-8 or lam[0] < 1e-14 * lam[-1]:
        raise ConditioningError(
            f"smallest singular value {np.sqrt(max(lam[0], 0.0)):.2e} too small"
        )
    s = np.sqrt(lam)
    R = (U / s) @ U.conj().T
    return theta @ R, R, U, s


def stiefel_map(theta):
    """Map a full-rank 2^n x K matrix to a CodeSubspace via the polar factor."""
    theta = np.asarray(theta, dtype=complex)
    m, K = theta.shape
    n = int(m).bit_length() - 1
    if 2 ** n != m:
        raise ValueError(f"row count {m} is not a power of two")
    psi, _, _, _ = _polar(theta)
    return CodeSubspace(n=n, K=K, basis=psi)


def _evaluate(theta, stack, spec, mu, want_grad):
    """Loss (and gradient, KL residual, length^2) at theta."""
    psi, R, U, s = _polar(theta)
    K = psi.shape[1]
    ops_psi = stack.apply(psi)
    A = np.matmul(psi.conj().T[None, :, :], ops_psi)  # (n_ops, K, K)
    idx = np.arange(K)
    diag = A[:, idx, idx].real
    mean = diag.mean(axis=1)
    spread = diag - mean[:, None]
    off_mask = ~np.eye(K, dtype=bool)
    kl = float(np.sum(np.abs(A[:, off_mask]) ** 2) + np.sum(spread ** 2))
    length_sq = float(mean @ mean)

    # kl_only is unweighted at the base stage; escalation still applies
    mu_eff = mu / spec.mu if spec.kind == "kl_only" else mu
    if spec.kind == "kl_only":
        loss = mu_eff * kl
    elif spec.kind == "minimize_length":
        loss = mu_eff * kl + length_sq
    elif spec.kind == "maximize_length":
        loss = mu_eff * kl - length_sq
    elif spec.kind == "target_length":
        loss = mu_eff * kl + (length_sq - spec.target_length ** 2) ** 2
    else:  # target_vector
        dv = mean - spec.target_vector
        loss = mu_eff * kl + float(dv @ dv)

    if not want_grad:
        return loss, {"kl": kl, "length_sq": length_sq, "components": mean}

    if spec.kind == "kl_only":
        g = np.zeros_like(mean)
    elif spec.kind == "minimize_length":
        g = mean / K
    elif spec.kind == "maximize_length":
        g = -mean / K
    elif spec.kind == "target_length":
        g = 2 * (length_sq - spec.target_length ** 2) * mean / K
    else:
        g = (mean - spec.target_vector) / K

    # M_a = W_a + W_a^dag where dL = sum_a 2 Re tr(W_a^dag dA_a)
    M = A + A.conj().transpose(0, 2, 1)
    M[:, idx, idx] = 0.0
    M *= mu_eff
    M[:, idx, idx] = 2 * mu_eff * spread + 2 * g[:, None]

    g_psi = np.matmul(ops_psi, M).sum(axis=0)
    T = theta.conj().T @ g_psi
    denom = -(s[:, None] * s[None, :]) * (s[:, None] + s[None, :])
    T_tilde = U.conj().T @ T @ U
    Q = U @ (T_tilde / denom) @ U.conj().T
    grad = 2 * (g_psi @ R + theta @ (Q + Q.conj().T))
    return loss, {"kl": kl, "length_sq": length_sq, "components": mean, "grad": grad}


def loss(theta, ops, spec):
    """Value of the selected loss at theta."""
    val, _ = _evaluate(np.asarray(theta, dtype=complex), _as_stack(ops), spec, spec.mu, False)
    return val


def gradient(theta, ops, spec):
    """Packed real gradient: dL/dRe(theta) + i dL/dIm(theta).

    A step theta - eta * gradient decreases the loss to first order; the
    directional derivative along a complex direction D is Re tr(grad^dag D).
    """
    _, aux = _evaluate(np.asarray(theta, dtype=complex), _as_stack(ops), spec, spec.mu, True)
    return aux["grad"]


def _real_inner(x, y):
    return float(np.real(np.vdot(x, y)))


def _descend_momentum(theta, stack, spec, mu, cfg, history=None, phase=0):
    """Monotone descent: momentum direction, Armijo backtracking."""
    f, aux = _evaluate(theta, stack, spec, mu, True)
    velocity = None
    step = cfg.step0
    iters = 0
    # the maximize loss is unbounded below by -length^2; no zero floor there
    floor = -np.inf if spec.kind == "maximize_length" else cfg.loss_floor
    for _ in range(cfg.max_iters):
        grad = aux["grad"]
        gnorm = float(np.linalg.norm(grad))
        if history is not None:
            history.append((phase, iters, f, aux["kl"], gnorm))
        if gnorm <= cfg.grad_tol or f <= floor:
            break
        if velocity is None:
            velocity = grad.copy()
        else:
            velocity = cfg.momentum * velocity + grad
        direction = -velocity
        slope = _real_inner(grad, direction)
        if slope >= -1e-18 * gnorm * np.linalg.norm(direction):
            velocity = grad.copy()
            direction = -grad
            slope = -gnorm ** 2
        accepted = False
        for attempt in range(2):
            t = step
            for _ in range(60):
                cand = theta + t * direction
                try:
                    f_new, aux_new = _evaluate(cand, stack, spec, mu, True)
                except ConditioningError:
                    t *= cfg.step_shrink
                    continue
                if f_new <= f + cfg.armijo * t * slope:
                    theta, f, aux = cand, f_new, aux_new
                    step = t * cfg.step_grow
                    accepted = True
                    break
                t *= cfg.step_shrink
            if accepted or attempt == 1:
                break
            # momentum direction failed even at tiny steps: reset and retry
            velocity = grad.copy()
            direction = -grad
            slope = -gnorm ** 2
        iters += 1
        if not accepted:
            break
    return theta, f, aux, iters, iters >= cfg.max_iters


def _descend_lbfgs(theta, stack, spec, mu, cfg, history=None, phase=0):
    """One escalation stage of L-BFGS on the real-packed parameters."""
    m, K = theta.shape

    def pack(t):
        return np.concatenate([t.real.ravel(), t.imag.ravel()])

    def unpack(x):
        return (x[: m * K] + 1j * x[m * K:]).reshape(m, K)

    def fun(x):
        try:
            f, aux = _evaluate(unpack(x), stack, spec, mu, True)
        except ConditioningError:
            return np.inf, np.zeros_like(x)
        g = aux["grad"]
        return f, np.concatenate([g.real.ravel(), g.imag.ravel()])

    callback = None
    if history is not None:
        counter = [0]

        def callback(xk):
            f, aux = _evaluate(unpack(xk), stack, spec, mu, False)
            history.append((phase, counter[0], f, aux["kl"], np.nan))
            counter[0] += 1

    res = scipy.optimize.minimize(
        fun,
        pack(theta),
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options=dict(maxiter=cfg.max_iters, ftol=1e-20, gtol=cfg.grad_tol, maxcor=20),
    )
    theta = unpack(res.x)
    f, aux = _evaluate(theta, stack, spec, mu, True)
    return theta, f, aux, int(res.nit), res.status == 1  # status 1: maxiter hit


def _descend(theta, stack, spec, mu, cfg, history=None, phase=0):
    if cfg.method == "momentum":
        return _descend_momentum(theta, stack, spec, mu, cfg, history, phase)
    if cfg.method == "lbfgs":
        return _descend_lbfgs(theta, stack, spec, mu, cfg, history, phase)
    raise ValueError(f"unknown method {cfg.method!r}")


def _thread_count(cfg):
    if cfg.threads is not None:
        return max(1, int(cfg.threads))
    env = os.environ.get("KLSCOPE_THREADS", "")
    return max(1, int(env)) if env.strip() else 1


def _run_restart(args):
    seed_index, seq, m, K, stack, spec, cfg = args
    rng = np.random.default_rng(seq)
    while True:
        theta = (rng.standard_normal((m, K)) + 1j * rng.standard_normal((m, K))) / np.sqrt(2)
        try:
            _polar(theta)
            break
        except ConditioningError:
            continue  # measure-zero event: re-draw the start
    history = [] if cfg.record_history else None
    total_iters = 0
    final_gnorm = np.inf
    exhausted = False
    for phase, scale in enumerate(cfg.mu_stages):
        theta, f, aux, iters, exhausted = _descend(
            theta, stack, spec, spec.mu * scale, cfg, history=history, phase=phase
        )
        total_iters += iters
        final_gnorm = float(np.linalg.norm(aux["grad"]))
    base_loss, base_aux = _evaluate(theta, stack, spec, spec.mu, False)
    return {
        "seed_index": seed_index,
        "theta": theta,
        "loss": base_loss,
        "kl": base_aux["kl"],
        "length_sq": base_aux["length_sq"],
        "components": base_aux["components"],
        "grad_norm": final_gnorm,
        "iterations": total_iters,
        # a stage that self-terminated (not by budget) is stationary to
        # machine precision even when mu-scaling inflates the gradient norm
        "stationary": (not exhausted) or final_gnorm <= STATIONARY_GRAD_NORM,
        "history": history,
    }


def optimize(n, K, ops, spec, config=None):
    """Multi-restart search; returns the best restart by loss (ties by KL)."""
    cfg = config or OptimizerConfig()
    stack = _as_stack(ops)
    m = 2 ** n
    t0 = time.perf_counter()
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    jobs = [(r, seqs[r], m, K, stack, spec, cfg) for r in range(cfg.restarts)]

    nthreads = _thread_count(cfg)
    outcomes = []
    if nthreads == 1:
        for job in jobs:
            outcomes.append(_run_restart(job))
            if cfg.stop_on_loss is not None and outcomes[-1]["loss"] <= cfg.stop_on_loss:
                break
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            futures = [pool.submit(_run_restart, job) for job in jobs]
            for fut in futures:
                outcomes.append(fut.result())
                if cfg.stop_on_loss is not None and outcomes[-1]["loss"] <= cfg.stop_on_loss:
                    for other in futures:
                        other.cancel()
                    break

    best = min(outcomes, key=lambda o: (o["loss"], o["kl"]))
    for o in outcomes:
        if o["loss"] <= best["loss"] + 1e-12 and o["kl"] < best["kl"]:
            best = o

    code = stiefel_map(best["theta"])
    if isinstance(ops, ErrorBasis):
        kl = codespace_kl_violation(code, ops)
        lam = float(np.sqrt(max(best["length_sq"], 0.0)))
        if kl <= cfg.kl_tol:
            lam = float(np.linalg.norm(signature_vector(code, ops, cfg.kl_tol).components))
    else:
        kl = best["kl"]
        lam = float(np.sqrt(max(best["length_sq"], 0.0)))
    converged = kl <= cfg.kl_tol and (
        best["stationary"] or best["iterations"] >= cfg.max_iters
    )
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    summaries = [
        RestartSummary(
            seed_index=o["seed_index"],
            final_loss=o["loss"],
            kl_violation=o["kl"],
            lambda_sq=o["length_sq"],
            iterations=o["iterations"],
            grad_norm=o["grad_norm"],
        )
        for o in outcomes
    ]
    return OptimizationResult(
        code=code,
        kl_violation=kl,
        lambda_star=lam,
        final_loss=best["loss"],
        iterations=best["iterations"],
        restarts_used=len(outcomes),
        converged=converged,
        wall_time_ms=wall_ms,
        restart_summaries=summaries,
        history=best["history"],
    )


@dataclass(frozen=True)
class JNRPoint:
    values: tuple
    residual: float
    hits: int


def jnr_feasibility(operators, K, config=None, residual_tol=1e-9, dedup_tol=1e-6):
    """Feasible tuples of the rank-K joint numerical range of Hermitian operators.

    Runs multi-start KL-residual minimization for P A_i P = v_i P and returns
    the deduplicated value tuples found with residual at most ``residual_tol``.
    """
    cfg = config or OptimizerConfig(restarts=200)
    stack = _as_stack(operators)
    spec = LossSpec(kind="kl_only", mu=1.0)
    m = stack.dim
    if not 1 <= K <= m:
        raise ValueError(f"need 1 <= K <= {m}, got {K}")
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    points = []
    for r in range(cfg.restarts):
        out = _run_restart((r, seqs[r], m, K, stack, spec, cfg))
        if out["kl"] <= residual_tol:
            vals = out["components"]
            for p in points:
                if np.abs(vals - np.asarray(p["values"])).max() <= dedup_tol:
                    p["hits"] += 1
                    p["residual"] = min(p["residual"], out["kl"])
                    break
            else:
                points.append(
                    {"values": tuple(float(v) for v in vals), "residual": out["kl"], "hits": 1}
                )
    return [JNRPoint(values=p["values"], residual=p["residual"], hits=p["hits"]) for p in points]
