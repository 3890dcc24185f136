"""
Resampling and incumbent statistics under noise
===============================================

With Gaussian noise of unit deviation added to OneMax, a single comparison
between neighbours is right only about 76% of the time. The noisy climber
keeps averaging every sample of its incumbent, so a lucky offspring can no
longer displace a good parent easily.
"""

import numpy as np

from banditrmhc import ProblemKind, ProblemSpec, RunConfig, SelectionPolicy, run
from banditrmhc.reference import true_accept_probability

noisy = ProblemSpec(ProblemKind.ONEMAX, noise_sigma=1.0)

for r in (1, 2, 3):
    print(f"P(accept better | r={r}) =", true_accept_probability(1.0, 1.0, r).value)

# Evaluations per dimension stay roughly flat as n grows with r = 2
for n in (50, 100, 200):
    evals = [run(RunConfig(noisy, n, resample=2, seed=s)).evals_used for s in range(10)]
    print(f"n={n:4d} bandit r=2: {np.mean(evals) / n:.2f} evals per dimension")

# Uniform selection without resampling stalls well below the optimum
out = run(RunConfig(noisy, 100, policy=SelectionPolicy.UNIFORM, resample=1, seed=0))
print("uniform r=1:", out.solved, out.final_true_fitness, "of 100")
