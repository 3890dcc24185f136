"""Experiment plans, batch execution, aggregation and CSV output.

A plan is a list of grid entries, each a Cartesian product over dimensions,
block sizes, noise levels, selection policies and resampling numbers. Every
resulting cell is repeated ``repetitions`` times with its own seed, mixed from
the master seed and the (cell, repetition) pair, so results do not depend on
execution order or on how many worker processes are used.

Plans are JSON documents::

    {
      "schema_version": 1,
      "repetitions": 100,
      "master_seed": 2017,
      "budget_factor": 1000,
      "grid": [
        {"problem": "onemax", "dims": [50, 100], "sigmas": [0.0],
         "policies": ["uniform", "bandit"]}
      ]
    }
"""
from __future__ import annotations

import csv
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .climbers import RunConfig, SelectionPolicy, run
from .fitness import PreconditionError, ProblemKind, ProblemSpec

__all__ = [
    "SCHEMA_VERSION",
    "PlanError",
    "GridEntry",
    "ExperimentPlan",
    "RunRecord",
    "AggregateRow",
    "mix_seed",
    "expand_plan",
    "execute",
    "aggregate",
    "write_csv",
    "read_records_csv",
    "read_aggregate_csv",
    "plan_from_dict",
    "read_plan",
    "write_plan",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MASK64 = (1 << 64) - 1

RECORD_COLUMNS = ["run_id", "seed", "algo", "problem", "dim", "block_size", "noise_sigma",
                  "resample", "budget", "solved", "evals_used", "generations", "wall_ns"]
KEY_COLUMNS = ["problem", "algo", "dim", "block_size", "noise_sigma", "resample"]
AGGREGATE_COLUMNS = KEY_COLUMNS + ["mean_evals", "stderr_evals", "solve_rate", "evals_per_dim"]


class PlanError(ValueError):
    """Malformed plan document or misconfigured plan."""


@dataclass(frozen=True)
class GridEntry:
    problem: ProblemKind
    dims: tuple[int, ...]
    block_sizes: tuple[int, ...] = (1,)
    sigmas: tuple[float, ...] = (0.0,)
    policies: tuple[SelectionPolicy, ...] = (SelectionPolicy.UNIFORM, SelectionPolicy.BANDIT)
    resamples: tuple[int, ...] = (1,)


@dataclass(frozen=True)
class ExperimentPlan:
    grid: tuple[GridEntry, ...]
    repetitions: int = 100
    master_seed: int = 0
    budget_factor: int = 1000


@dataclass
class RunRecord:
    cell: int
    repetition: int
    seed: int
    algo: str
    problem: str
    dim: int
    block_size: int
    noise_sigma: float
    resample: int
    budget: int
    solved: bool
    evals_used: int
    generations: int
    wall_ns: int = 0
    final_true_fitness: int = 0
    error: str | None = field(default=None, compare=False)

    @property
    def run_id(self) -> str:
        return f"{self.cell}-{self.repetition}"

    @property
    def key(self) -> tuple:
        return (self.problem, self.algo, self.dim, self.block_size, self.noise_sigma, self.resample)


@dataclass
class AggregateRow:
    problem: str
    algo: str
    dim: int
    block_size: int
    noise_sigma: float
    resample: int
    mean_evals: float
    stderr_evals: float
    solve_rate: float
    evals_per_dim: float
    runs: int = 0


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, cell: int, repetition: int) -> int:
    """64-bit run seed. Injective in (cell, repetition) for a fixed master seed,
    as long as both are below 2**32."""
    packed = ((cell & 0xFFFFFFFF) << 32) | (repetition & 0xFFFFFFFF)
    return _splitmix64((master_seed + packed * 0xD1B54A32D192ED03) & MASK64)


def _cells(plan: ExperimentPlan):
    seen = set()
    for entry in plan.grid:
        for dim, block, sigma, policy, r in itertools.product(
                entry.dims, entry.block_sizes, entry.sigmas, entry.policies, entry.resamples):
            if entry.problem is ProblemKind.ONEMAX:
                block = 1
            if sigma == 0:
                r = 1
            key = (entry.problem, dim, block, float(sigma), policy, r)
            if key in seen:
                continue
            seen.add(key)
            yield key


def expand_plan(plan: ExperimentPlan) -> list[RunConfig]:
    """One config per (cell, repetition), ordered by cell then repetition.

    OneMax cells ignore block sizes and noise-free cells ignore resampling;
    duplicates that arise from this are dropped.
    """
    if not plan.grid:
        raise PlanError("plan has an empty grid")
    if plan.repetitions < 1:
        raise PlanError("repetitions must be >= 1")
    configs = []
    for cell, (kind, dim, block, sigma, policy, r) in enumerate(_cells(plan)):
        problem = ProblemSpec(kind, block, sigma)
        for rep in range(plan.repetitions):
            configs.append(RunConfig(
                problem=problem, n=dim, policy=policy, resample=r,
                budget=plan.budget_factor * dim,
                seed=mix_seed(plan.master_seed, cell, rep),
                noisy_mode=sigma > 0,
            ))
    if not configs:
        raise PlanError("plan has no grid cells")
    return configs


def _run_record(job) -> RunRecord:
    cell, rep, cfg, timed = job
    rec = RunRecord(cell=cell, repetition=rep, seed=cfg.seed, algo=cfg.policy.value,
                    problem=cfg.problem.kind.value, dim=cfg.n, block_size=cfg.problem.block_size,
                    noise_sigma=cfg.problem.noise_sigma, resample=cfg.resample,
                    budget=cfg.budget, solved=False, evals_used=0, generations=0)
    start = time.perf_counter_ns()
    try:
        out = run(cfg)
    except ValueError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    if timed:
        rec.wall_ns = time.perf_counter_ns() - start
    rec.solved = out.solved
    rec.evals_used = out.evals_used
    rec.generations = out.generations
    rec.final_true_fitness = out.final_true_fitness
    return rec


def execute(plan: ExperimentPlan, parallelism: int = 1, timed: bool = True) -> list[RunRecord]:
    """Run every config of ``plan``.

    Records come back ordered by (cell, repetition) whatever the parallelism.
    A run that fails its own validation yields a record with ``error`` set
    and the batch carries on. With ``timed=False`` every ``wall_ns`` is 0 and
    the output is fully reproducible.
    """
    if parallelism < 1:
        raise PlanError(f"parallelism must be >= 1, got {parallelism}")
    configs = expand_plan(plan)
    reps = plan.repetitions
    jobs = [(k // reps, k % reps, cfg, timed) for k, cfg in enumerate(configs)]
    if parallelism == 1:
        records = [_run_record(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_run_record, jobs, chunksize=max(1, len(jobs) // (4 * parallelism))))
    for rec in records:
        if rec.error:
            log.warning("run %s failed: %s", rec.run_id, rec.error)
    records.sort(key=lambda rec: (rec.cell, rec.repetition))
    return records


def aggregate(records) -> list[AggregateRow]:
    """Mean and standard error of evaluations over solved runs, per configuration.

    Unsolved runs only lower ``solve_rate``; if nothing was solved the mean
    and per-dimension columns are NaN.
    """
    records = list(records)
    if not records:
        raise PreconditionError("cannot aggregate an empty record list")
    groups: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        groups.setdefault(rec.key, []).append(rec)
    rows = []
    for key in sorted(groups, key=lambda k: (k[0], k[3], k[4], k[1], k[5], k[2])):
        group = groups[key]
        evals = np.array([r.evals_used for r in group if r.solved], dtype=float)
        if evals.size:
            mean = float(evals.mean())
            stderr = float(evals.std(ddof=1) / math.sqrt(evals.size)) if evals.size > 1 else 0.0
        else:
            mean = stderr = math.nan
        problem, algo, dim, block, sigma, r = key
        rows.append(AggregateRow(problem, algo, dim, block, sigma, r, mean, stderr,
                                 evals.size / len(group), mean / dim, len(group)))
    return rows


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows, path) -> None:
    """Write run records or aggregate rows, chosen by the type of the first row."""
    rows = list(rows)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if rows and isinstance(rows[0], AggregateRow):
            w.writerow(AGGREGATE_COLUMNS)
            for row in rows:
                w.writerow([_fmt(getattr(row, c)) for c in AGGREGATE_COLUMNS])
        else:
            w.writerow(RECORD_COLUMNS)
            for rec in rows:
                w.writerow([rec.run_id] + [_fmt(getattr(rec, c)) for c in RECORD_COLUMNS[1:]])


def _read_rows(path, expected: list[str]):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected:
            raise ValueError(f"{path}: unexpected CSV header {header}")
        for row in reader:
            yield dict(zip(header, row))


def read_records_csv(path) -> list[RunRecord]:
    out = []
    for d in _read_rows(path, RECORD_COLUMNS):
        cell, rep = (int(x) for x in d["run_id"].split("-"))
        out.append(RunRecord(
            cell=cell, repetition=rep, seed=int(d["seed"]), algo=d["algo"], problem=d["problem"],
            dim=int(d["dim"]), block_size=int(d["block_size"]), noise_sigma=float(d["noise_sigma"]),
            resample=int(d["resample"]), budget=int(d["budget"]), solved=d["solved"] == "1",
            evals_used=int(d["evals_used"]), generations=int(d["generations"]),
            wall_ns=int(d["wall_ns"])))
    return out


def read_aggregate_csv(path) -> list[AggregateRow]:
    return [AggregateRow(d["problem"], d["algo"], int(d["dim"]), int(d["block_size"]),
                         float(d["noise_sigma"]), int(d["resample"]), float(d["mean_evals"]),
                         float(d["stderr_evals"]), float(d["solve_rate"]), float(d["evals_per_dim"]))
            for d in _read_rows(path, AGGREGATE_COLUMNS)]


def _plan_to_dict(plan: ExperimentPlan) -> dict:
    grid = []
    for entry in plan.grid:
        d = asdict(entry)
        d["problem"] = entry.problem.value
        d["policies"] = [p.value for p in entry.policies]
        grid.append({k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()})
    return {"schema_version": SCHEMA_VERSION, "repetitions": plan.repetitions,
            "master_seed": plan.master_seed, "budget_factor": plan.budget_factor, "grid": grid}


def write_plan(plan: ExperimentPlan, path) -> None:
    Path(path).write_text(json.dumps(_plan_to_dict(plan), indent=2) + "\n", encoding="utf-8")


def _field(d: dict, name: str, where: str, kind, default=None, *, required=False, minimum=None):
    if name not in d:
        if required:
            raise PlanError(f"{where}: missing required field '{name}'")
        return default
    value = d[name]
    ok = isinstance(value, kind) and not isinstance(value, bool)
    if not ok or (minimum is not None and value < minimum):
        bound = f" >= {minimum}" if minimum is not None else ""
        raise PlanError(f"{where}: field '{name}' must be {kind.__name__}{bound}, got {value!r}")
    return value


def _list_field(d: dict, name: str, where: str, convert, default=None, *, required=False):
    if name not in d:
        if required:
            raise PlanError(f"{where}: missing required field '{name}'")
        return default
    value = d[name]
    if not isinstance(value, list) or not value:
        raise PlanError(f"{where}: field '{name}' must be a non-empty list, got {value!r}")
    out = []
    for k, item in enumerate(value):
        try:
            out.append(convert(item))
        except (TypeError, ValueError) as exc:
            raise PlanError(f"{where}: field '{name}[{k}]': {exc}") from None
    return tuple(out)


def _pos_int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ValueError(f"expected a positive integer, got {v!r}")
    return v


def _sigma(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v >= 0:
        raise ValueError(f"expected a non-negative number, got {v!r}")
    return float(v)


def plan_from_dict(d, source: str = "<plan>") -> ExperimentPlan:
    if not isinstance(d, dict):
        raise PlanError(f"{source}: top level must be an object")
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise PlanError(f"{source}: field 'schema_version': unsupported value {version!r}, "
                        f"expected {SCHEMA_VERSION}")
    grid_raw = d.get("grid")
    if not isinstance(grid_raw, list) or not grid_raw:
        raise PlanError(f"{source}: field 'grid' must be a non-empty list")
    grid = []
    for k, g in enumerate(grid_raw):
        where = f"{source}: grid[{k}]"
        if not isinstance(g, dict):
            raise PlanError(f"{where}: must be an object")
        unknown = set(g) - {f for f in GridEntry.__dataclass_fields__}
        if unknown:
            raise PlanError(f"{where}: unknown field(s) {sorted(unknown)}")
        try:
            kind = ProblemKind(_field(g, "problem", where, str, required=True))
        except ValueError:
            raise PlanError(f"{where}: field 'problem' must be one of "
                            f"{[p.value for p in ProblemKind]}") from None
        grid.append(GridEntry(
            problem=kind,
            dims=_list_field(g, "dims", where, _pos_int, required=True),
            block_sizes=_list_field(g, "block_sizes", where, _pos_int, (1,)),
            sigmas=_list_field(g, "sigmas", where, _sigma, (0.0,)),
            policies=_list_field(g, "policies", where, SelectionPolicy,
                                 (SelectionPolicy.UNIFORM, SelectionPolicy.BANDIT)),
            resamples=_list_field(g, "resamples", where, _pos_int, (1,)),
        ))
    return ExperimentPlan(
        grid=tuple(grid),
        repetitions=_field(d, "repetitions", source, int, 100, minimum=1),
        master_seed=_field(d, "master_seed", source, int, 0, minimum=0),
        budget_factor=_field(d, "budget_factor", source, int, 1000, minimum=1),
    )


def read_plan(path) -> ExperimentPlan:
    text = Path(path).read_text(encoding="utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return plan_from_dict(d, str(path))
