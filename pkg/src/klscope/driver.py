"""Sweep harness and command-line interface.

Subcommands: sweep (feasibility scan of target lengths, CSV out), optimize
(single search, JSON out), construct (exact families and built-in stabilizer
codes, code JSON out), verify (re-check a code JSON), enumerate (weight
enumerator CSV), jnr (joint-numerical-range feasibility CSV).
"""

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import families
from .codespace import (
    apply_local_unitary,
    code_from_json,
    code_to_json,
    kl_violation,
    lambda_star,
    signature_to_csv,
    signature_vector,
)
from .enumerators import (
    enumerator_to_csv,
    lambda_star_sq_from_enumerator,
    weight_enumerators,
)
from .optimizer import LossSpec, OptimizerConfig, jnr_feasibility, optimize
from .pauli import dense_matrix, enumerate_error_basis, pauli_from_string
from .stabilizer import builtin, codespace_from_stabilizer, parse_generators

SWEEP_CSV_HEADER = "target_lambda_sq,final_loss,kl_violation,achieved_lambda_sq,restarts_used,wall_ms"

RESULT_JSON_FORMAT = "klscope.result/1"


@dataclass(frozen=True)
class SweepRow:
    target_lambda_sq: float
    final_loss: float
    kl_violation: float
    achieved_lambda_sq: float
    restarts_used: int
    wall_ms: int

    def csv(self):
        return (
            f"{float(self.target_lambda_sq)!r},{float(self.final_loss)!r},"
            f"{float(self.kl_violation)!r},{float(self.achieved_lambda_sq)!r},"
            f"{self.restarts_used},{self.wall_ms}"
        )


@dataclass
class SweepResult:
    rows: list

    def csv(self):
        lines = [SWEEP_CSV_HEADER]
        lines.extend(row.csv() for row in self.rows)
        return "\n".join(lines) + "\n"


def _sweep_point(n, K, basis, target_sq, mu, config):
    t0 = time.perf_counter()
    spec = LossSpec(kind="target_length", mu=mu, target_length=math.sqrt(max(target_sq, 0.0)))
    result = optimize(n, K, basis, spec, config)
    achieved_sq = result.lambda_star ** 2
    final_loss = (achieved_sq - target_sq) ** 2 + result.kl_violation
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    return SweepRow(
        target_lambda_sq=float(target_sq),
        final_loss=final_loss,
        kl_violation=result.kl_violation,
        achieved_lambda_sq=achieved_sq,
        restarts_used=result.restarts_used,
        wall_ms=wall_ms,
    )


def sweep(n, K, d, grid, mu=1000.0, config=None, done=None, on_row=None):
    """Scan target lambda*^2 values; returns rows sorted by target.

    ``done`` supplies already-completed rows (for resume); ``on_row`` is
    called after each newly computed point, in grid order.  With
    KLSCOPE_THREADS (or config.threads) above one, grid points run on a
    worker pool and each point's restarts run serially.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty sweep grid")
    cfg = config or OptimizerConfig(restarts=12, stop_on_loss=1e-12)
    basis = enumerate_error_basis(n, d)
    rows = list(done or [])
    have = {round(r.target_lambda_sq, 12) for r in rows}
    todo = [float(t) for t in grid if round(float(t), 12) not in have]

    nthreads = _sweep_threads(cfg)
    if nthreads <= 1 or len(todo) <= 1:
        for target_sq in todo:
            row = _sweep_point(n, K, basis, target_sq, mu, cfg)
            rows.append(row)
            if on_row is not None:
                on_row(row)
    else:
        from concurrent.futures import ThreadPoolExecutor
        from dataclasses import replace

        point_cfg = replace(cfg, threads=1)
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            futures = [
                pool.submit(_sweep_point, n, K, basis, t, mu, point_cfg)
                for t in todo
            ]
            for fut in futures:  # grid order, regardless of completion order
                row = fut.result()
                rows.append(row)
                if on_row is not None:
                    on_row(row)
    rows.sort(key=lambda r: r.target_lambda_sq)
    return SweepResult(rows=rows)


def _sweep_threads(cfg):
    if cfg.threads is not None:
        return max(1, int(cfg.threads))
    env = os.environ.get("KLSCOPE_THREADS", "")
    return max(1, int(env)) if env.strip() else 1


def read_sweep_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != SWEEP_CSV_HEADER:
        raise ValueError(f"bad sweep CSV header: {lines[:1]}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        rows.append(
            SweepRow(
                target_lambda_sq=float(parts[0]),
                final_loss=float(parts[1]),
                kl_violation=float(parts[2]),
                achieved_lambda_sq=float(parts[3]),
                restarts_used=int(parts[4]),
                wall_ms=int(parts[5]),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# construct / verify helpers shared by the CLI and tests


def construct_code(kind, **kwargs):
    """Build a code by family name; returns (CodeSubspace, info dict)."""
    if kind == "family623":
        theta = kwargs.get("theta")
        e_vector = kwargs.get("e_vector")
        if theta is not None:
            frame = families.single_param_frame_623(float(theta))
        elif e_vector is not None:
            rng = np.random.default_rng(kwargs.get("seed", 0))
            frame = families.frame_with_e(np.asarray(e_vector, dtype=float), rng)
        else:
            raise ValueError("family623 needs --theta or --e-vector")
        code = families.code_623(frame)
        return code, {"family": "623", "e": frame.e.tolist()}
    if kind == "family723":
        lam = float(kwargs["lambda_star"])
        branch = kwargs.get("branch") or "--"
        signs = {"+": 1, "-": -1}
        coeffs = families.cyclic_coeffs_from_lambda(
            lam, branch_c1=signs[branch[0]], branch_c3=signs[branch[1]]
        )
        code = families.cyclic_code_723(coeffs)
        return code, {
            "family": "723-cyclic",
            "coefficients": coeffs.as_array.tolist(),
            "branch": branch,
        }
    if kind == "permcode":
        variant = kwargs.get("variant", "plus")
        return families.perm_code_723(variant), {"family": "723-perm", "variant": variant}
    if kind == "stabilizer":
        name = kwargs.get("name")
        rows = kwargs.get("rows")
        stab = builtin(name) if name else parse_generators(rows)
        return codespace_from_stabilizer(stab), {
            "family": "stabilizer",
            "generators": [str(g) for g in stab.generators],
        }
    raise ValueError(f"unknown constructor {kind!r}")


def verify_code(code, d=3, tol=1e-10, lu_samples=3, seed=0):
    """Re-check a code: KL residual, lambda*, enumerator identity, LU drift."""
    basis = enumerate_error_basis(code.n, d)
    violation = kl_violation(code, basis)
    report = {"n": code.n, "K": code.K, "d": d, "kl_violation": violation}
    if violation <= tol:
        sig = signature_vector(code, basis, tol)
        lam = lambda_star(sig)
        report["lambda_star"] = lam
        we = weight_enumerators(code)
        report["enumerator_lambda_sq"] = lambda_star_sq_from_enumerator(we)
        report["enumerator_consistent"] = bool(
            abs(report["enumerator_lambda_sq"] - lam ** 2) <= 1e-8
        )
        rng = np.random.default_rng(seed)
        drift = 0.0
        for _ in range(lu_samples):
            factors = [_haar_unitary(rng) for _ in range(code.n)]
            moved = apply_local_unitary(code, factors)
            sig2 = signature_vector(moved, basis, max(tol, 1e-9))
            drift = max(drift, abs(lambda_star(sig2) - lam))
        report["lu_drift"] = drift
        report["valid"] = True
    else:
        report["valid"] = False
    return report


def _haar_unitary(rng):
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# ---------------------------------------------------------------------------
# CLI


def _add_optimizer_flags(p):
    p.add_argument("--mu", type=float, default=1000.0)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kl-tol", type=float, default=1e-10)


def _config_from_args(args, default_restarts, stop_on_loss=None):
    return OptimizerConfig(
        seed=args.seed,
        restarts=args.restarts if args.restarts is not None else default_restarts,
        max_iters=args.max_iters,
        kl_tol=args.kl_tol,
        stop_on_loss=stop_on_loss,
    )


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_sweep(args):
    if args.grid:
        grid = [float(x) for x in args.grid.split(",")]
    else:
        n_steps = int(round((args.to - getattr(args, "from")) / args.step))
        grid = [getattr(args, "from") + k * args.step for k in range(n_steps + 1)]
    done = []
    out_path = args.out
    if args.resume:
        with open(args.resume) as fh:
            done = read_sweep_csv(fh.read())
        out_path = out_path or args.resume

    cfg = _config_from_args(args, default_restarts=12, stop_on_loss=1e-12)
    written = []

    def flush(rows):
        text = SWEEP_CSV_HEADER + "\n" + "".join(r.csv() + "\n" for r in rows)
        if out_path not in (None, "-"):
            with open(out_path, "w") as fh:
                fh.write(text)

    def on_row(row):
        written.append(row)
        flush(done + written)  # rewrite after every completed point

    result = sweep(args.n, args.K, args.d, grid, mu=args.mu, config=cfg,
                   done=done, on_row=on_row)
    flush(result.rows)
    if out_path in (None, "-"):
        sys.stdout.write(result.csv())
    return 0


def _cmd_optimize(args):
    params = {}
    if args.config:
        with open(args.config) as fh:
            params = json.load(fh)
    n = params.get("n", args.n)
    K = params.get("K", args.K)
    d = params.get("d", args.d)
    mode = params.get("mode", args.mode)
    mu = params.get("mu", args.mu)
    lam = params.get("lambda_target", args.lambda_target)
    cfg = OptimizerConfig(
        seed=params.get("seed", args.seed),
        restarts=params.get("restarts", args.restarts if args.restarts is not None else 50),
        max_iters=params.get("max_iters", args.max_iters),
        kl_tol=params.get("kl_tol", args.kl_tol),
    )
    if n is None or K is None:
        raise SystemExit("optimize needs --n and --K (or a --config file)")
    if mode == "target_length" and lam is None:
        raise SystemExit("target_length mode needs --lambda-target")
    spec = LossSpec(
        kind=mode,
        mu=mu,
        target_length=abs(lam) if mode == "target_length" else None,
    )
    basis = enumerate_error_basis(n, d)
    result = optimize(n, K, basis, spec, cfg)
    payload = {
        "format": RESULT_JSON_FORMAT,
        "mode": mode,
        "mu": mu,
        "lambda_target": lam,
        "kl_violation": result.kl_violation,
        "lambda_star": result.lambda_star,
        "lambda_sq": result.lambda_star ** 2,
        "final_loss": result.final_loss,
        "iterations": result.iterations,
        "restarts_used": result.restarts_used,
        "converged": result.converged,
        "wall_time_ms": result.wall_time_ms,
        "code": json.loads(code_to_json(result.code)),
    }
    _write(args.out, json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_construct(args):
    kwargs = {
        "theta": args.theta,
        "e_vector": [float(x) for x in args.e_vector.split(",")] if args.e_vector else None,
        "lambda_star": args.lambda_star,
        "branch": args.branch,
        "variant": args.variant,
        "name": args.name,
        "rows": None,
        "seed": args.seed,
    }
    if args.generators:
        with open(args.generators) as fh:
            kwargs["rows"] = [ln for ln in fh.read().splitlines() if ln.strip()]
    code, info = construct_code(args.family, **kwargs)
    payload = json.loads(code_to_json(code))
    payload["info"] = info
    _write(args.out, json.dumps(payload) + "\n")
    return 0


def _load_code(path):
    if path == "-":
        return code_from_json(sys.stdin.read())
    with open(path) as fh:
        return code_from_json(fh.read())


def _cmd_verify(args):
    code = _load_code(args.code)
    report = verify_code(code, d=args.d, tol=args.kl_tol, seed=args.seed)
    _write(args.out, json.dumps(report, indent=2) + "\n")
    return 0 if report["valid"] else 1


def _cmd_enumerate(args):
    code = _load_code(args.code)
    we = weight_enumerators(code)
    _write(args.out, enumerator_to_csv(we))
    return 0


def _cmd_signature(args):
    code = _load_code(args.code)
    basis = enumerate_error_basis(code.n, args.d)
    sig = signature_vector(code, basis, args.kl_tol)
    _write(args.out, signature_to_csv(sig))
    return 0


def _cmd_jnr(args):
    with open(args.operators) as fh:
        words = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    mats = [dense_matrix(pauli_from_string(w)) for w in words]
    cfg = OptimizerConfig(seed=args.seed, restarts=args.restarts or 200,
                          max_iters=args.max_iters)
    points = jnr_feasibility(mats, args.K, cfg)
    lines = [",".join(words) + ",residual,hits"]
    for p in points:
        lines.append(
            ",".join(repr(v) for v in p.values) + f",{p.residual!r},{p.hits}"
        )
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="klscope",
        description="Signature vectors and lambda* for quantum codes: "
        "exact families, enumerators, and Stiefel-manifold search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="scan target lambda*^2 values, CSV out")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--from", type=float, default=0.5, dest="from")
    p.add_argument("--to", type=float, default=1.1)
    p.add_argument("--step", type=float, default=0.02)
    p.add_argument("--grid", type=str, default=None, help="comma list overriding from/to/step")
    p.add_argument("--resume", type=str, default=None, help="existing CSV to continue")
    p.add_argument("--out", type=str, default=None)
    _add_optimizer_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize", help="single search, result JSON out")
    p.add_argument("--config", type=str, default=None, help="JSON config file")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--mode", type=str, default="minimize_length",
                   choices=["kl_only", "minimize_length", "maximize_length", "target_length"])
    p.add_argument("--lambda-target", type=float, default=None)
    p.add_argument("--out", type=str, default=None)
    _add_optimizer_flags(p)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("construct", help="build an exact code, JSON out")
    p.add_argument("family", choices=["family623", "family723", "permcode", "stabilizer"])
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--e-vector", type=str, default=None, help="comma list of 5 reals")
    p.add_argument("--lambda-star", type=float, default=None)
    p.add_argument("--branch", type=str, default="--", help="two signs: c1 branch, c3 branch")
    p.add_argument("--variant", type=str, default="plus", choices=["plus", "minus"])
    p.add_argument("--name", type=str, default=None, help="builtin stabilizer code name")
    p.add_argument("--generators", type=str, default=None, help="generator file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="re-check a code JSON")
    p.add_argument("code", help="code JSON path or - for stdin")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--kl-tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("enumerate", help="weight enumerator CSV for a code JSON")
    p.add_argument("code")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("signature", help="signature vector CSV for a code JSON")
    p.add_argument("code")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--kl-tol", type=float, default=1e-10)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_signature)

    p = sub.add_parser("jnr", help="rank-K joint numerical range feasibility")
    p.add_argument("--operators", type=str, required=True,
                   help="file with one Pauli word per line")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_jnr)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
