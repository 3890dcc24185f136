"""Random mutation hill-climbers, noise-free and noisy.

Both climbers flip exactly one bit of the incumbent per generation and accept
the offspring when it is at least as fit. The gene to flip is drawn uniformly
(classic RMHC) or chosen by the per-gene bandits of :mod:`banditrmhc.bandit`.

The noisy climber keeps a running average of every sample taken of the
incumbent since it was accepted (``best_fit`` over ``m`` samples) and draws
``resample`` fresh samples of both incumbent and offspring each generation.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bandit import GeneBanditArray, record_outcome, select_gene
from .fitness import (
    EvalCounter,
    ProblemSpec,
    evaluate,
    flip_bit,
    make_rng,
    random_bitstring,
    sample_fitness,
    true_fitness,
)

__all__ = [
    "ConfigurationError",
    "SelectionPolicy",
    "RunConfig",
    "RunOutcome",
    "TraceRow",
    "Comparison",
    "uniform_select",
    "noisy_acceptance",
    "run_noise_free",
    "run_noisy",
    "run",
    "write_trace_csv",
]

DEFAULT_BUDGET_FACTOR = 1000


class ConfigurationError(ValueError):
    """The run configuration does not fit the requested climber."""


class SelectionPolicy(str, enum.Enum):
    UNIFORM = "uniform"
    BANDIT = "bandit"


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one climb.

    ``budget`` defaults to ``1000 * n`` evaluations. ``noisy_mode`` defaults
    to ``problem.noise_sigma > 0``. ``memoryless`` makes the noisy climber
    forget the incumbent's past samples every generation (sensitivity checks
    only).
    """

    problem: ProblemSpec
    n: int
    policy: SelectionPolicy = SelectionPolicy.BANDIT
    resample: int = 1
    budget: int | None = None
    seed: int = 0
    noisy_mode: bool | None = None
    memoryless: bool = False

    def __post_init__(self):
        object.__setattr__(self, "policy", SelectionPolicy(self.policy))
        if self.budget is None:
            object.__setattr__(self, "budget", DEFAULT_BUDGET_FACTOR * self.n)
        if self.noisy_mode is None:
            object.__setattr__(self, "noisy_mode", self.problem.noise_sigma > 0)
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if self.budget < 1:
            raise ConfigurationError(f"budget must be >= 1, got {self.budget}")
        if self.noisy_mode and self.resample < 1:
            raise ConfigurationError(f"resample must be >= 1, got {self.resample}")


@dataclass
class RunOutcome:
    evals_used: int
    solved: bool
    generations: int
    final_true_fitness: int
    genome: np.ndarray = field(repr=False)
    bandits: GeneBanditArray | None = field(default=None, repr=False)


@dataclass(frozen=True)
class TraceRow:
    generation: int
    gene: int
    delta: float
    accepted: bool
    evals: int
    m: int
    true_fitness: int
    best_fit: float = 0.0
    x_samples: tuple = ()
    y_samples: tuple = ()


class Comparison(NamedTuple):
    accepted: bool
    best_fit: float
    m: int
    average: float


def uniform_select(n: int, rng: np.random.Generator) -> int:
    return int(rng.integers(n))


def noisy_acceptance(best_fit: float, m: int, x_samples, y_samples,
                     memoryless: bool = False) -> Comparison:
    """Fold fresh incumbent samples into its running mean and test the offspring.

    The offspring wins ties. On acceptance the offspring's sample mean becomes
    the incumbent estimate; on rejection the refreshed average is kept.
    """
    x_samples = np.asarray(x_samples, dtype=float)
    y_samples = np.asarray(y_samples, dtype=float)
    r = x_samples.size
    if memoryless:
        average = float(x_samples.mean())
        kept_m = r
    else:
        average = float((best_fit * m + x_samples.sum()) / (m + r))
        kept_m = m + r
    fit_y = float(y_samples.mean())
    if fit_y >= average:
        return Comparison(True, fit_y, y_samples.size, average)
    return Comparison(False, average, kept_m, average)


def _selector(cfg: RunConfig, rng):
    if cfg.policy is SelectionPolicy.BANDIT:
        bandits = GeneBanditArray(cfg.n)
        return bandits, lambda: select_gene(bandits, rng)
    return None, lambda: uniform_select(cfg.n, rng)


def run_noise_free(cfg: RunConfig, trace: list | None = None) -> RunOutcome:
    """Noise-free climb: the incumbent is evaluated once and never again.

    The bandit reward of a generation is the incumbent's fitness minus the
    offspring's, credited to the state the flipped gene moved into.
    """
    if cfg.noisy_mode or cfg.problem.noise_sigma > 0:
        raise ConfigurationError("noise-free climber needs noise_sigma == 0 and noisy_mode off")
    problem, n = cfg.problem, cfg.n
    optimum = problem.optimum(n)
    rng = make_rng(cfg.seed)
    counter = EvalCounter()
    bandits, select = _selector(cfg, rng)

    x = random_bitstring(n, rng)
    best = evaluate(problem, x, rng, counter)
    generations = 0
    if trace is not None:
        trace.append(TraceRow(0, -1, 0.0, True, counter.count, 1, int(best), best, (), (best,)))
    while best < optimum and counter.count + 1 <= cfg.budget:
        i = select()
        y = flip_bit(x, i)
        fit_y = evaluate(problem, y, rng, counter)
        generations += 1
        delta = best - fit_y
        accepted = fit_y >= best
        if bandits is not None:
            record_outcome(bandits, i, int(y[i]), delta)
        if accepted:
            x, best = y, fit_y
        if trace is not None:
            trace.append(TraceRow(generation=generations, gene=i, delta=delta,
                                  accepted=accepted, evals=counter.count, m=1,
                                  true_fitness=true_fitness(problem, x), best_fit=best))
    final = true_fitness(problem, x)
    return RunOutcome(counter.count, final == optimum, generations, final, x, bandits)


def run_noisy(cfg: RunConfig, trace: list | None = None) -> RunOutcome:
    """Noisy climb with incumbent statistics and ``cfg.resample`` samples per genome.

    Each generation costs ``2 * resample`` evaluations. Whether the optimum
    has been reached is checked with the noiseless fitness, which is not
    counted and never influences the search.
    """
    if not cfg.noisy_mode:
        raise ConfigurationError("noisy climber needs noisy_mode on")
    if cfg.resample < 1:
        raise ConfigurationError(f"resample must be >= 1, got {cfg.resample}")
    problem, n, r = cfg.problem, cfg.n, cfg.resample
    optimum = problem.optimum(n)
    rng = make_rng(cfg.seed)
    counter = EvalCounter()
    bandits, select = _selector(cfg, rng)

    x = random_bitstring(n, rng)
    best = evaluate(problem, x, rng, counter)
    m = 1
    x_true = true_fitness(problem, x)
    generations = 0
    if trace is not None:
        trace.append(TraceRow(0, -1, 0.0, True, counter.count, m, x_true, best, (), (best,)))
    while x_true < optimum and counter.count + 2 * r <= cfg.budget:
        i = select()
        y = flip_bit(x, i)
        xs = sample_fitness(problem, x, rng, counter, r)
        ys = sample_fitness(problem, y, rng, counter, r)
        generations += 1
        cmp = noisy_acceptance(best, m, xs, ys, cfg.memoryless)
        delta = cmp.average - float(ys.mean())
        if bandits is not None:
            record_outcome(bandits, i, int(y[i]), delta)
        if cmp.accepted:
            x = y
            x_true = true_fitness(problem, x)
        best, m = cmp.best_fit, cmp.m
        if trace is not None:
            trace.append(TraceRow(generation=generations, gene=i, delta=delta,
                                  accepted=cmp.accepted, evals=counter.count, m=m,
                                  true_fitness=x_true, best_fit=best,
                                  x_samples=tuple(xs.tolist()), y_samples=tuple(ys.tolist())))
    return RunOutcome(counter.count, x_true == optimum, generations, x_true, x, bandits)


def run(cfg: RunConfig, trace: list | None = None) -> RunOutcome:
    if cfg.noisy_mode:
        return run_noisy(cfg, trace)
    return run_noise_free(cfg, trace)


TRACE_COLUMNS = ["generation", "gene", "delta", "accepted", "evals", "m", "true_fitness"]


def write_trace_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for t in rows:
            w.writerow([t.generation, t.gene, repr(float(t.delta)), int(t.accepted),
                        t.evals, t.m, t.true_fitness])
