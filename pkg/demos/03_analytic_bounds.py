"""
Analytic guarantees next to measured behavior
=============================================

Three closed-form results ship with the library:

* a lower bound on the success probability, driven by the description
  length d of the instance,
* a tail bound telling how large d can get for random inputs,
* the iteration budget a random-broadcast gossip needs for a target
  error, which is what the protocol is competing against.
"""

import numpy as np

from scalablemax import (
    ExperimentConfig,
    d_tail_bound,
    description_length,
    harness,
    rb_iterations_for_error,
    success_bound,
)
from scalablemax.harness import build_agents

# --- success bound vs measurement -----------------------------------------

runs = 2000
config = ExperimentConfig(agents=100, m=8, noise_db=0.0, runs=runs, base_seed=5)
successes = 0
bounds = []
for i, result in enumerate(harness.iterate_runs(config, compute_d=True)):
    successes += result.success
    bounds.append(success_bound(result.realized_d, 8, 1.0))

print("success probability, n=100, m=8, noise variance 1:")
print(f"  analytic lower bound (mean over instances): {np.mean(bounds):.3f}")
print(f"  measured success rate over {runs} runs:      {successes / runs:.3f}")

# --- description length tail ----------------------------------------------

ds = [description_length(build_agents(config, i)) for i in range(300)]
d0 = d_tail_bound(100, 0, 0.01)
print(f"\ndescription length, n=100 random instances:")
print(f"  observed: min {min(ds)}, mean {np.mean(ds):.1f}, max {max(ds)}")
print(f"  a single instance exceeds d0 = {d0:.1f} with probability at most 1%")

# --- gossip budgets -------------------------------------------------------

print("\nrandom-broadcast budget for 0.5% error on the complete graph:")
for n in (1000, 2000, 4000):
    print(f"  n={n}: {rb_iterations_for_error(n, 0.005)} iterations")
print("the budget grows linearly in n; the WMAC protocol above needs a")
print("near-constant number of iterations over the same range")
