"""Command line entry point: ``run``, ``sweep``, ``report`` and ``oracle``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from . import harness, reference
from .bandit import write_bandit_stats
from .climbers import RunConfig, SelectionPolicy, run, write_trace_csv
from .fitness import ProblemKind, ProblemSpec
from .report import emit_plot_svg


def _cmd_run(args) -> int:
    problem = ProblemSpec(args.problem, args.block, args.sigma)
    cfg = RunConfig(problem=problem, n=args.dim, policy=args.algo, resample=args.resample,
                    budget=args.budget_factor * args.dim, seed=args.seed,
                    memoryless=args.memoryless)
    trace = [] if args.trace else None
    out = run(cfg, trace)
    if args.trace:
        write_trace_csv(trace, args.trace)
    if args.bandit_stats:
        if out.bandits is None:
            raise ValueError("--bandit-stats needs --algo bandit")
        write_bandit_stats(out.bandits, args.bandit_stats)
    print(json.dumps({"solved": out.solved, "evals_used": out.evals_used,
                      "generations": out.generations,
                      "final_true_fitness": out.final_true_fitness, "budget": cfg.budget}))
    return 0


def _cmd_sweep(args) -> int:
    plan = harness.read_plan(args.plan)
    records = harness.execute(plan, args.parallel, timed=not args.no_timing)
    harness.write_csv(records, args.out)
    if args.aggregate:
        harness.write_csv(harness.aggregate(records), args.aggregate)
    failed = sum(r.error is not None for r in records)
    print(f"{len(records)} runs written to {args.out}" + (f" ({failed} failed)" if failed else ""))
    return 0


def _load_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        header = next(csv.reader(fh), [])
    if header == harness.RECORD_COLUMNS:
        return harness.aggregate(harness.read_records_csv(path))
    return harness.read_aggregate_csv(path)


def _cmd_report(args) -> int:
    rows = _load_rows(args.input)
    if args.problem:
        rows = [r for r in rows if r.problem == args.problem]
    emit_plot_svg(rows, args.mode.replace("-", "_"), args.svg)
    print(f"wrote {args.svg}")
    return 0


def _cmd_oracle(args) -> int:
    if args.name not in reference.ORACLES:
        raise ValueError(f"unknown oracle {args.name!r}; choose from {sorted(reference.ORACLES)}")
    fn, types = reference.ORACLES[args.name]
    if len(args.args) != len(types):
        raise ValueError(f"oracle {args.name} takes {len(types)} argument(s)")
    print(fn(*(t(a) for t, a in zip(types, args.args))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="banditrmhc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a single climb")
    r.add_argument("--problem", choices=[k.value for k in ProblemKind], default="onemax")
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--block", type=int, default=1)
    r.add_argument("--sigma", type=float, default=1.0, help="noise std. dev.; 0 for noise-free")
    r.add_argument("--algo", choices=[s.value for s in SelectionPolicy], default="bandit")
    r.add_argument("--resample", type=int, default=1)
    r.add_argument("--budget-factor", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--memoryless", action="store_true",
                   help="noisy mode: forget incumbent samples every generation")
    r.add_argument("--trace", metavar="PATH", help="write a per-generation CSV trace")
    r.add_argument("--bandit-stats", metavar="PATH", help="write per-gene bandit statistics")
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("sweep", help="execute an experiment plan")
    s.add_argument("--plan", required=True)
    s.add_argument("--out", required=True, help="per-run CSV")
    s.add_argument("--aggregate", metavar="PATH", help="also write aggregated CSV")
    s.add_argument("--parallel", type=int, default=1)
    s.add_argument("--no-timing", action="store_true", help="write wall_ns as 0 (reproducible bytes)")
    s.set_defaults(func=_cmd_sweep)

    rp = sub.add_parser("report", help="plot a run or aggregate CSV as SVG")
    rp.add_argument("--in", dest="input", required=True)
    rp.add_argument("--mode", choices=["evals", "evals-per-dim"], default="evals")
    rp.add_argument("--svg", required=True)
    rp.add_argument("--problem", choices=[k.value for k in ProblemKind])
    rp.set_defaults(func=_cmd_report)

    o = sub.add_parser("oracle", help="evaluate a reference formula")
    o.add_argument("name", help=", ".join(sorted(reference.ORACLES)))
    o.add_argument("args", nargs="*")
    o.set_defaults(func=_cmd_oracle)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
