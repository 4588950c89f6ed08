# demos/search_sweep.py
# Penalty search over the Stiefel manifold: find the extremes of lambda*^2
# for the ((6,2,3)) code, then scan target values across the transition.
# Reduced restart counts keep this demo around a minute; raise them for
# production-quality scans.
import klscope as kl
from klscope.driver import sweep
from klscope.optimizer import LossSpec, OptimizerConfig, optimize


def main():
    basis = kl.enumerate_error_basis(6, 3)
    cfg = OptimizerConfig(seed=0, restarts=12)

    print("searching the extremes of lambda*^2 for ((6,2,3)) (12 restarts each):")
    rmin = optimize(6, 2, basis, LossSpec("minimize_length", mu=1000.0), cfg)
    print(f"  minimize: lambda*^2 = {rmin.lambda_star**2:.9f}  "
          f"KL = {rmin.kl_violation:.1e}  ({rmin.wall_time_ms} ms)")
    rmax = optimize(6, 2, basis, LossSpec("maximize_length", mu=1000.0), cfg)
    print(f"  maximize: lambda*^2 = {rmax.lambda_star**2:.9f}  "
          f"KL = {rmax.kl_violation:.1e}  ({rmax.wall_time_ms} ms)")

    grid = [0.50, 0.55, 0.60, 0.70, 0.85, 1.00, 1.05, 1.10]
    print(f"\nreduced sweep over targets {grid}:")
    result = sweep(6, 2, 3, grid, mu=1000.0,
                   config=OptimizerConfig(seed=1, restarts=8, stop_on_loss=1e-12))
    print("  target    final_loss   achieved    KL")
    for row in result.rows:
        marker = "feasible" if row.final_loss <= 1e-8 else "infeasible"
        print(f"  {row.target_lambda_sq:.2f}      {row.final_loss:.3e}   "
              f"{row.achieved_lambda_sq:.6f}  {row.kl_violation:.0e}  {marker}")
    print("\nCSV (plot final_loss vs target on a log axis to see the transition):")
    print(result.csv())


if __name__ == "__main__":
    main()
