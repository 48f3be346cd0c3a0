"""The price of overlap: deeper trees, and what the total error buys.

Overlap slows the shrink rate from 1/2 to (1/2 + alpha) per step, so
reaching a fixed resolution takes more steps.  A log-ratio formula
approximates the exact iterated depth well.  Composing per-step errors shows
the trade-off: more steps, but each far safer.
"""

import numpy as np

from overlap_search import (
    PropagationModel,
    SensorPolicy,
    end_to_end_error,
    tree_depth_approx,
    tree_depth_exact,
)
from overlap_search.experiments import analytic_step_errors, find_alpha_for_depth

print("steps to localize 1 of 100000 candidates:")
print(f"{'alpha':>6} {'exact':>6} {'approx':>7}")
for alpha in (0.0, 0.05, 0.1, 0.15, 0.2, 0.24):
    print(f"{alpha:6.2f} {tree_depth_exact(100_000, 1, alpha):6d} "
          f"{tree_depth_approx(100_000, 1, alpha):7d}")

# Deeper trees give more chances to err, but overlap shrinks each chance much
# faster: the total exclusion probability falls steadily with depth.
model = PropagationModel(p0=20.0, eta=1.0, epsilon=10.0, sigma=0.2)
policy = SensorPolicy.symmetric_edge_index()
n0, n_beta, L = 2**14, 2**7, 500.0

print(f"\ndriving a {n0}-point grid down to {n_beta} points:")
print(f"{'depth':>6} {'alpha used':>11} {'total error':>12}")
for beta in (14, 15, 16, 17):
    alpha = find_alpha_for_depth(n0, n_beta, beta)
    if alpha is None:
        print(f"{beta:6d} {'infeasible':>11}")
        continue
    step_errors = analytic_step_errors(n0, n_beta, L, model, alpha, policy)
    print(f"{beta:6d} {alpha:11.4f} {end_to_end_error(step_errors):12.3e}")
print("(depths beyond 17 would need alpha >= 0.25, where shrinkage stalls)")
