"""Acceptance criteria A1-A8, each at its stated tolerance.

Every criterion appends one ``[Ax] PASS|FAIL ...`` line, shown in the
terminal summary. Run directly with ``python3 tests/test_acceptance.py``.
"""
import numpy as np
import pytest

from banditrmhc.climbers import RunConfig, SelectionPolicy, noisy_acceptance, run
from banditrmhc.fitness import EvalCounter, ProblemKind, ProblemSpec, make_rng, sample_fitness
from banditrmhc.harness import ExperimentPlan, GridEntry, aggregate, execute, write_csv
from banditrmhc.reference import expected_evals_uniform_onemax, true_accept_probability

MASTER_SEED = 2017
REPS = 100
BANDIT, UNIFORM = SelectionPolicy.BANDIT, SelectionPolicy.UNIFORM

pytestmark = pytest.mark.acceptance


def sweep(entry, reps=REPS, seed=MASTER_SEED):
    plan = ExperimentPlan(grid=(entry,), repetitions=reps, master_seed=seed)
    records = execute(plan, timed=False)
    assert all(r.error is None for r in records)
    return {(row.algo, row.dim): row for row in aggregate(records)}


def report(log, tag, ok, detail):
    line = f"[{tag}] {'PASS' if ok else 'FAIL'} {detail}"
    log.append(line)
    print(line)
    assert ok, line


def test_a1_bandit_onemax_close_to_dimension(acceptance_log):
    rows = sweep(GridEntry(ProblemKind.ONEMAX, (50, 100, 200), policies=(BANDIT,)))
    means = {n: rows["bandit", n].mean_evals for n in (50, 100, 200)}
    ok = all(n <= m <= 1.15 * n for n, m in means.items())
    detail = ", ".join(f"n={n}: {m:.2f} in [{n}, {1.15 * n:g}]" for n, m in means.items())
    report(acceptance_log, "A1", ok, detail)


def test_a2_uniform_onemax_matches_oracle(acceptance_log):
    rows = sweep(GridEntry(ProblemKind.ONEMAX, (50, 100), policies=(UNIFORM,)))
    parts, ok = [], True
    for n in (50, 100):
        expect = expected_evals_uniform_onemax(n).value
        rel = abs(rows["uniform", n].mean_evals - expect) / expect
        ok &= rel <= 0.10
        parts.append(f"n={n}: {rows['uniform', n].mean_evals:.1f} vs {expect:.1f} ({rel:.1%})")
    report(acceptance_log, "A2", ok, ", ".join(parts))


def test_a3_speedup_at_500(acceptance_log):
    rows = sweep(GridEntry(ProblemKind.ONEMAX, (500,)))
    ratio = rows["uniform", 500].mean_evals / rows["bandit", 500].mean_evals
    report(acceptance_log, "A3", 4 <= ratio <= 7, f"uniform/bandit at n=500 = {ratio:.2f} in [4, 7]")


def test_a4_noisy_bandit_scaling(acceptance_log):
    rows = sweep(GridEntry(ProblemKind.ONEMAX, (50, 100, 200), sigmas=(1.0,),
                           policies=(BANDIT,), resamples=(2,)))
    per_dim = {n: rows["bandit", n].evals_per_dim for n in (50, 100, 200)}
    solved = {n: rows["bandit", n].solve_rate for n in (50, 100, 200)}
    spread = max(per_dim.values()) / min(per_dim.values())
    ok = all(s == 1.0 for s in solved.values()) and spread <= 1.5
    detail = (", ".join(f"n={n}: solve {solved[n]:.2f}, {per_dim[n]:.2f}/dim" for n in per_dim)
              + f"; max/min = {spread:.3f} <= 1.5")
    report(acceptance_log, "A4", ok, detail)


def test_a5_noisy_uniform_fails(acceptance_log):
    rows = sweep(GridEntry(ProblemKind.ONEMAX, (100,), sigmas=(1.0,), policies=(UNIFORM,),
                           resamples=(1,)))
    rate = rows["uniform", 100].solve_rate
    report(acceptance_log, "A5", rate <= 0.2, f"uniform r=1 n=100 solve rate = {rate:.2f} <= 0.2")


def test_a6_royal_road_halves_budget(acceptance_log):
    rows = sweep(GridEntry(ProblemKind.ROYAL_ROAD, (64,), block_sizes=(8,)))
    b, u = rows["bandit", 64], rows["uniform", 64]
    ratio = b.mean_evals / u.mean_evals
    report(acceptance_log, "A6", ratio <= 0.6 and b.solve_rate == u.solve_rate == 1.0,
           f"bandit {b.mean_evals:.0f} / uniform {u.mean_evals:.0f} = {ratio:.3f} <= 0.6")


def test_a7_memoryless_accept_frequency(acceptance_log):
    problem = ProblemSpec(ProblemKind.ONEMAX, noise_sigma=1.0)
    rng = make_rng(MASTER_SEED)
    counter = EvalCounter()
    worse = np.zeros(10, dtype=np.uint8)
    better = worse.copy()
    better[0] = 1
    trials = 100_000
    hits = 0
    for _ in range(trials):
        xs = sample_fitness(problem, worse, rng, counter, 1)
        ys = sample_fitness(problem, better, rng, counter, 1)
        # stale incumbent state must be ignored in memoryless mode
        hits += noisy_acceptance(1e9, 50, xs, ys, memoryless=True).accepted
    freq = hits / trials
    expect = true_accept_probability(1.0, 1.0, 1).value
    report(acceptance_log, "A7", abs(freq - 0.7602) <= 0.01,
           f"frequency {freq:.4f} vs 0.7602 +- 0.01 (closed form {expect:.4f})")


def test_a8_determinism_and_accounting(acceptance_log, tmp_path):
    plan = ExperimentPlan(grid=(
        GridEntry(ProblemKind.ONEMAX, (20, 40)),
        GridEntry(ProblemKind.ONEMAX, (20,), sigmas=(1.0,), resamples=(1, 2, 3)),
        GridEntry(ProblemKind.ROYAL_ROAD, (16,), block_sizes=(4,)),
    ), repetitions=10, master_seed=MASTER_SEED, budget_factor=100)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    records = execute(plan, timed=False)
    write_csv(records, a)
    write_csv(execute(plan, 2, timed=False), b)
    identical = a.read_bytes() == b.read_bytes()

    accounted = all(
        r.evals_used == (1 + 2 * r.resample * r.generations if r.noise_sigma > 0
                         else 1 + r.generations)
        for r in records)

    distinct = True
    for seed in range(50):
        for sigma in (0.0, 1.0):
            n = 30
            trace = []
            run(RunConfig(ProblemSpec(ProblemKind.ONEMAX, noise_sigma=sigma), n, seed=seed), trace)
            genes = [t.gene for t in trace[1:n + 1]]
            distinct &= len(set(genes)) == len(genes)

    report(acceptance_log, "A8", identical and accounted and distinct,
           f"byte-identical={identical}, accounting={accounted} over {len(records)} runs, "
           f"first-n distinct={distinct}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
