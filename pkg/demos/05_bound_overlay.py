# Theoretical regret bounds next to measured regret.  The bounds need the
# smoothness pair (nu, rho) and a near-optimality constant C; the algorithms
# themselves never see any of these.
#
# Garland near its optimum drops like a square root, so rho = 3^(-1/2) per
# ternary depth is the honest decay rate and the per-depth count of
# near-optimal cells stays bounded (d = 0).

import math

from zipftree import (BoundInputs, ExperimentSpec, SmoothnessParams,
                      count_near_optimal, emit_bound_overlay, garland_objective,
                      run_experiment, sequool_bound, stroquool_bounds)

params = SmoothnessParams(nu=1.0, rho=3 ** -0.5, C=3.0, d=0.0)
obj = garland_objective()

# empirical sanity check of d = 0: cells within nu*rho^h of the optimum
profile = [count_near_optimal(obj, 3, h, params.nu * params.rho ** h)
           for h in range(9)]
print("near-optimal cells per depth (nu rho^h scale):", profile)
print("counts settle instead of growing geometrically, so d = 0 is the regime")

budgets = [100, 400, 1600, 6400]
# sequool only accepts noiseless feedback, so the measured runs are split;
# the overlay spec carries both noise levels for the bound columns.
records = run_experiment(ExperimentSpec(
    algorithms=["sequool"], objective="garland", budgets=budgets, seeds=1))
records += run_experiment(ExperimentSpec(
    algorithms=["stroquool"], objective="garland", budgets=budgets,
    noise_b=[0.1], seeds=5))
overlay_spec = ExperimentSpec(algorithms=["sequool", "stroquool"],
                              objective="garland", budgets=budgets,
                              noise_b=[0.0, 0.1], seeds=5)
overlay = emit_bound_overlay(overlay_spec, params, out="bound_overlay.csv")

print(f"\n{'n':>6} {'seq bound':>11} {'seq regret':>11} "
      f"{'stro bound b=.1':>16} {'stro regret b=.1':>17}")
for row in overlay:
    n = row["n"]
    seq = sorted(r.regret for r in records if r.algo == "sequool" and r.n == n)
    stro = sorted(r.regret for r in records
                  if r.algo == "stroquool" and r.n == n and r.b == 0.1)
    sb = row.get("stroquool_b=0.1")
    print(f"{n:>6} {row['sequool']:>11.3e} {seq[len(seq) // 2]:>11.3e} "
          f"{'n/a' if sb is None else format(sb, '>16.3e')} "
          f"{stro[len(stro) // 2]:>17.3e}")

out = stroquool_bounds(BoundInputs(n=6400, b=0.1), params)
print(f"\nat n=6400, b=0.1: {out['regime']}-noise regime, "
      f"crossover depth h~ = {out['h_tilde']:.3f}, "
      f"depth budget M = {out['M']}")
print("bounds are worst case, so at small n they are vacuous (3.0 covers the")
print("whole range); past n~1000 the noiseless bound dives below the measured")
print("curve instead, because the bound lives in exact arithmetic while the")
print("measured regret is pinned at the 1.2e-8 float64 floor of the cusp.")
print("the shape -- decay in n, growth in b -- is the point, not the constants.")
print("wrote bound_overlay.csv")
