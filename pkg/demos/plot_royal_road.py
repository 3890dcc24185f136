"""
Royal Road with blocks of eight
===============================

Royal Road only rewards complete blocks, so most single flips are neutral and
accepted. The bandits learn which genes have been costly to disturb and steer
mutation toward the unfinished blocks.
"""

import numpy as np

from banditrmhc import ProblemKind, ProblemSpec, RunConfig, SelectionPolicy, run

road = ProblemSpec(ProblemKind.ROYAL_ROAD, block_size=8, noise_sigma=0.0)

for policy in SelectionPolicy:
    evals = [run(RunConfig(road, 64, policy=policy, seed=s)).evals_used for s in range(10)]
    print(f"{policy.value:8s} mean evals over 10 runs: {np.mean(evals):.0f}")

# Per-gene statistics after one bandit run
out = run(RunConfig(road, 64, seed=3))
print("pulls per gene:", out.bandits.gene_totals())
print("mean deltas (state 0, state 1):")
print(np.round(out.bandits.mean_deltas(), 2))
