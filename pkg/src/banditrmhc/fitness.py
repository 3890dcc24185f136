"""Binary genomes, benchmark fitness functions and noisy evaluation.

Genomes are plain ``numpy.uint8`` arrays of zeros and ones. Two problems are
provided: OneMax (count of ones) and the Royal Road function R1, where a block
of ``b`` consecutive bits contributes ``b`` to the fitness only once every bit
in it is set. Noisy evaluation adds ``sigma * N(0, 1)`` to the true fitness.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "PreconditionError",
    "ProblemKind",
    "ProblemSpec",
    "EvalCounter",
    "make_rng",
    "onemax_fitness",
    "royal_road_fitness",
    "true_fitness",
    "evaluate",
    "sample_fitness",
    "random_bitstring",
    "flip_bit",
]


class PreconditionError(ValueError):
    """Raised when an operation is called with arguments outside its domain."""


class ProblemKind(str, enum.Enum):
    ONEMAX = "onemax"
    ROYAL_ROAD = "royalroad"


@dataclass(frozen=True)
class ProblemSpec:
    """Which fitness function to optimise and how noisy it is.

    Parameters
    ----------
    kind : ProblemKind
        OneMax or Royal Road.
    block_size : int
        Royal Road block length. Ignored (treated as 1) for OneMax.
    noise_sigma : float
        Standard deviation of the additive Gaussian noise, in fitness units.
        ``0`` gives a deterministic fitness.
    """

    kind: ProblemKind = ProblemKind.ONEMAX
    block_size: int = 1
    noise_sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind(self.kind))
        if self.block_size < 1:
            raise PreconditionError(f"block_size must be >= 1, got {self.block_size}")
        if not self.noise_sigma >= 0:
            raise PreconditionError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    @property
    def effective_block(self) -> int:
        return self.block_size if self.kind is ProblemKind.ROYAL_ROAD else 1

    def check_length(self, n: int) -> None:
        if n < 1:
            raise PreconditionError(f"genome length must be >= 1, got {n}")
        if n % self.effective_block:
            raise PreconditionError(
                f"genome length {n} is not a multiple of block size {self.block_size}"
            )

    def optimum(self, n: int) -> int:
        # c_i = b for every block, so the all-ones string scores n either way
        self.check_length(n)
        return n


class EvalCounter:
    """Counts fitness evaluations. Only ever goes up."""

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def tick(self, k: int = 1) -> None:
        self.count += k

    def __repr__(self):
        return f"EvalCounter({self.count})"


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator; the same seed always yields the same draws."""
    return np.random.default_rng(seed)


def onemax_fitness(s) -> int:
    return int(np.count_nonzero(s))


def royal_road_fitness(s, block_size: int) -> int:
    s = np.asarray(s)
    n = s.shape[0]
    if block_size < 1 or n % block_size:
        raise PreconditionError(
            f"genome length {n} is not a multiple of block size {block_size}"
        )
    complete = np.all(s.reshape(-1, block_size) == 1, axis=1)
    return int(block_size * np.count_nonzero(complete))


def true_fitness(problem: ProblemSpec, s) -> int:
    """Noise-free fitness. Does not touch any evaluation counter."""
    if problem.kind is ProblemKind.ONEMAX:
        return onemax_fitness(s)
    return royal_road_fitness(s, problem.block_size)


def evaluate(problem: ProblemSpec, s, rng: np.random.Generator, counter: EvalCounter) -> float:
    """One counted, possibly noisy, fitness evaluation of ``s``."""
    counter.tick()
    f = float(true_fitness(problem, s))
    if problem.noise_sigma > 0:
        f += problem.noise_sigma * rng.standard_normal()
    return f


def sample_fitness(problem: ProblemSpec, s, rng: np.random.Generator,
                   counter: EvalCounter, r: int) -> np.ndarray:
    """``r`` independent counted evaluations of ``s``, as a float array.

    Equivalent in distribution to calling :func:`evaluate` ``r`` times; the
    noiseless value is computed only once.
    """
    counter.tick(r)
    f = float(true_fitness(problem, s))
    if problem.noise_sigma > 0:
        return f + problem.noise_sigma * rng.standard_normal(r)
    return np.full(r, f)


def random_bitstring(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise PreconditionError(f"genome length must be >= 1, got {n}")
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def flip_bit(s, i: int) -> np.ndarray:
    """Copy of ``s`` with bit ``i`` inverted."""
    s = np.asarray(s, dtype=np.uint8)
    if not 0 <= i < s.shape[0]:
        raise PreconditionError(f"index {i} out of range for length {s.shape[0]}")
    out = s.copy()
    out[i] ^= 1
    return out
