"""Per-gene two-armed bandits that decide which bit to mutate next.

Each gene ``i`` keeps, for each state ``j`` in {0, 1} the gene can be flipped
into, the number of times that transition was tried and the summed reward
observed for it. The urgency of a gene is::

    -mean(j*) + sqrt(ln(T + 1) / (2 * pulls(j*))) + U(0, 1e-6)

where ``j*`` is the visited arm with the highest mean reward and ``T`` is the
exploration count (by default the number of selections made across the whole
array). A gene whose best transition already pays off is left alone; genes
that are rarely selected slowly become urgent again as ``T`` grows. Genes that
have never been selected outrank every visited gene.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .fitness import PreconditionError

__all__ = [
    "TIE_BREAK",
    "UndefinedMeanError",
    "ArmStats",
    "GeneBandit",
    "GeneBanditArray",
    "arm_mean",
    "urgency",
    "urgencies",
    "select_gene",
    "record_outcome",
    "write_bandit_stats",
]

#: Upper bound of the uniform tie-breaking term added to every urgency.
TIE_BREAK = 1e-6


class UndefinedMeanError(PreconditionError):
    """Mean reward requested for an arm that was never pulled."""


@dataclass
class ArmStats:
    pulls: int = 0
    delta_sum: float = 0.0

    def __post_init__(self):
        if self.pulls < 0:
            raise PreconditionError("pulls must be non-negative")
        if self.pulls == 0 and self.delta_sum != 0:
            raise PreconditionError("an unpulled arm cannot carry a reward sum")


@dataclass
class GeneBandit:
    arms: tuple[ArmStats, ArmStats] = field(default_factory=lambda: (ArmStats(), ArmStats()))

    @property
    def total(self) -> int:
        return self.arms[0].pulls + self.arms[1].pulls


class GeneBanditArray:
    """Statistics for ``n`` independent gene bandits, stored as arrays.

    ``pulls[i, j]`` and ``delta_sum[i, j]`` hold arm ``j`` of gene ``i``.
    """

    def __init__(self, n: int):
        if n < 1:
            raise PreconditionError(f"need at least one gene, got {n}")
        self.pulls = np.zeros((n, 2), dtype=np.int64)
        self.delta_sum = np.zeros((n, 2), dtype=np.float64)
        self.total_selections = 0

    def __len__(self):
        return self.pulls.shape[0]

    def __getitem__(self, i: int) -> GeneBandit:
        """Snapshot of gene ``i``; mutating it does not touch the array."""
        return GeneBandit((
            ArmStats(int(self.pulls[i, 0]), float(self.delta_sum[i, 0])),
            ArmStats(int(self.pulls[i, 1]), float(self.delta_sum[i, 1])),
        ))

    def gene_totals(self) -> np.ndarray:
        return self.pulls.sum(axis=1)

    def mean_deltas(self) -> np.ndarray:
        """``(n, 2)`` array of arm means, NaN where an arm is unvisited."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.pulls > 0, self.delta_sum / self.pulls, np.nan)


def arm_mean(arm: ArmStats) -> float:
    if arm.pulls <= 0:
        raise UndefinedMeanError("arm has no pulls; its mean is undefined")
    return arm.delta_sum / arm.pulls


def urgency(bandit: GeneBandit, rng: np.random.Generator, total: int | None = None) -> float:
    """Urgency of a single gene.

    Parameters
    ----------
    bandit : GeneBandit
        Arm statistics of the gene.
    rng : numpy.random.Generator
        Source of the tie-breaking draws.
    total : int, optional
        Count used in the exploration numerator. Defaults to the gene's own
        number of selections; :func:`select_gene` passes the array-wide count.

    Returns
    -------
    float
        ``inf`` for a gene never selected, otherwise the finite urgency.
    """
    if bandit.total == 0:
        return math.inf
    if total is None:
        total = bandit.total
    visited = [j for j in (0, 1) if bandit.arms[j].pulls > 0]
    means = {j: arm_mean(bandit.arms[j]) for j in visited}
    best = max(means.values())
    tied = [j for j in visited if means[j] == best]
    j_star = tied[0] if len(tied) == 1 else int(rng.integers(2))
    explore = math.sqrt(math.log(total + 1) / (2 * bandit.arms[j_star].pulls))
    return -best + explore + rng.uniform(0.0, TIE_BREAK)


def _base_urgencies(arr: GeneBanditArray, rng: np.random.Generator) -> np.ndarray:
    # Vectorised urgency without the tie-break term; unvisited genes are +inf.
    pulls, sums = arr.pulls, arr.delta_sum
    n = len(arr)
    visited = pulls > 0
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(visited, sums / np.maximum(pulls, 1), -np.inf)
    j_star = np.argmax(means, axis=1)
    tied = visited.all(axis=1) & (means[:, 0] == means[:, 1])
    if tied.any():
        coin = rng.integers(0, 2, size=n)
        j_star = np.where(tied, coin, j_star)
    rows = np.arange(n)
    best = means[rows, j_star]
    best_pulls = pulls[rows, j_star]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -best + np.sqrt(math.log(arr.total_selections + 1) / (2.0 * best_pulls))
    out[~visited.any(axis=1)] = np.inf
    return out


def urgencies(arr: GeneBanditArray, rng: np.random.Generator) -> np.ndarray:
    """Urgency of every gene, tie-break term included."""
    return _base_urgencies(arr, rng) + rng.uniform(0.0, TIE_BREAK, size=len(arr))


def select_gene(arr: GeneBanditArray, rng: np.random.Generator) -> int:
    """Index of the most urgent gene.

    Unvisited genes always win; among several of them the choice is uniform.
    """
    if len(arr) == 0:
        raise PreconditionError("cannot select from an empty bandit array")
    base = _base_urgencies(arr, rng)
    u = rng.uniform(0.0, TIE_BREAK, size=len(arr))
    fresh = np.flatnonzero(np.isinf(base))
    if fresh.size:
        return int(fresh[np.argmax(u[fresh])])
    return int(np.argmax(base + u))


def record_outcome(arr: GeneBanditArray, i: int, j: int, delta: float) -> None:
    """Credit ``delta`` to arm ``j`` (the state reached) of gene ``i``."""
    if not 0 <= i < len(arr):
        raise PreconditionError(f"gene index {i} out of range for {len(arr)} genes")
    if j not in (0, 1):
        raise PreconditionError(f"state must be 0 or 1, got {j}")
    arr.pulls[i, j] += 1
    arr.delta_sum[i, j] += delta
    arr.total_selections += 1


def write_bandit_stats(arr: GeneBanditArray, path) -> None:
    """Per-gene CSV dump: gene_index, N0, N1, mean_delta0, mean_delta1."""
    means = arr.mean_deltas()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["gene_index", "N0", "N1", "mean_delta0", "mean_delta1"])
        for i in range(len(arr)):
            w.writerow([i, int(arr.pulls[i, 0]), int(arr.pulls[i, 1]),
                        "" if np.isnan(means[i, 0]) else repr(float(means[i, 0])),
                        "" if np.isnan(means[i, 1]) else repr(float(means[i, 1]))])
