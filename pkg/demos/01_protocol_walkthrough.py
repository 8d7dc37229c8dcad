"""
One ScalableMax run, step by step
=================================

Eight agents draw random binary sequences, a coordinator grows a prefix
estimate of the maximum, and we watch every decision it takes.
"""

import numpy as np

from scalablemax import (
    AgentSequence,
    CoordinatorState,
    NoiseModel,
    run_iteration,
    evaluate_outcome,
    true_max_index,
)

rng = np.random.default_rng(7)
seeds = np.random.SeedSequence(7).generate_state(8, dtype=np.uint64)
agents = [AgentSequence(prefix=(), tail_seed=int(s)) for s in seeds]

print("inputs (first 12 digits):")
for i, x in enumerate(agents):
    digits = "".join(str(x.digit(k)) for k in range(12))
    marker = "  <- true max" if i == true_max_index(agents) else ""
    print(f"  agent {i}: {digits}...{marker}")

# a mildly noisy channel: 0 dB means noise variance equal to the
# transmission power of a single agent
noise = NoiseModel.from_db(0.0)
state = CoordinatorState()

print("\niterations:")
while True:
    decision = run_iteration(agents, state, m=4, noise=noise, rng=rng)
    if decision.terminates:
        print(f"  t={state.iteration}: {decision.branch} -> stop with {decision.condition}")
        break
    state.last_delta = f"{state.estimate} -> {decision.new_estimate}"
    state.estimate = decision.new_estimate
    print(f"  t={state.iteration}: {decision.branch:<12} S = {state.estimate}")

count, success = evaluate_outcome(decision.condition, agents, m=4)
print(f"\nsuccess: {success}")
print(f"survivors: {count} of {len(agents)} agents")
print("the survivor set always contains the true maximum; a short digital")
print("finishing phase among the survivors then yields full consensus")
