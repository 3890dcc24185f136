"""
A small sweep and its SVG report
================================

Experiment plans are JSON files. ``execute`` runs every grid cell for a number
of repetitions with seeds derived from one master seed, ``aggregate`` reduces
solved runs to a mean and standard error, and ``emit_plot_svg`` charts them.
"""

from pathlib import Path

from banditrmhc.fitness import ProblemKind
from banditrmhc.harness import ExperimentPlan, GridEntry, aggregate, execute, write_csv, write_plan
from banditrmhc.report import emit_plot_svg

out_dir = Path("sweep_output")
out_dir.mkdir(exist_ok=True)

plan = ExperimentPlan(grid=(GridEntry(ProblemKind.ONEMAX, (25, 50, 100, 200)),),
                      repetitions=20, master_seed=5)
write_plan(plan, out_dir / "plan.json")

records = execute(plan, timed=False)
rows = aggregate(records)
write_csv(records, out_dir / "runs.csv")
write_csv(rows, out_dir / "aggregate.csv")
emit_plot_svg(rows, "evals_per_dim", out_dir / "evals_per_dim.svg")

for row in rows:
    print(f"{row.algo:8s} n={row.dim:4d} {row.mean_evals:9.1f} +- {row.stderr_evals:.1f}")
