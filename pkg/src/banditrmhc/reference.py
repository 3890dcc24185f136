"""Closed-form reference values used to check the climbers."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .fitness import PreconditionError

__all__ = [
    "OracleResult",
    "normal_cdf",
    "expected_evals_uniform_onemax",
    "true_accept_probability",
    "ORACLES",
]


@dataclass(frozen=True)
class OracleResult:
    value: float
    description: str

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"oracle value must be finite, got {self.value}")

    def __str__(self):
        return f"{self.value!r}  ({self.description})"


def normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def expected_evals_uniform_onemax(n: int) -> OracleResult:
    """Expected evaluations of uniform one-bit RMHC on noise-free OneMax.

    From ``k`` zeros the climber improves with probability ``k/n``, so it needs
    ``n * H(k0)`` generations on average from ``k0`` initial zeros. ``k0`` is
    Binomial(n, 1/2); the initial evaluation adds one.
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    log_norm = math.lgamma(n + 1) - n * math.log(2.0)
    harmonic = 0.0
    total = 0.0
    for k in range(1, n + 1):
        harmonic += 1.0 / k
        log_p = log_norm - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        total += math.exp(log_p) * harmonic
    return OracleResult(1.0 + n * total, "1 + n * E[H(K)], K ~ Binomial(n, 1/2)")


def true_accept_probability(gap: float, sigma: float, r: int = 1) -> OracleResult:
    """Chance that the mean of ``r`` noisy samples of a genome ``gap`` better
    than its rival is at least the rival's mean of ``r`` samples."""
    if not sigma > 0:
        raise PreconditionError("sigma must be > 0; with no noise acceptance is deterministic")
    if r < 1:
        raise PreconditionError(f"r must be >= 1, got {r}")
    z = gap * math.sqrt(r) / (sigma * math.sqrt(2.0))
    return OracleResult(normal_cdf(z), "Phi(gap * sqrt(r) / (sigma * sqrt(2)))")


ORACLES = {
    "expected-evals-uniform-onemax": (expected_evals_uniform_onemax, (int,)),
    "true-accept-probability": (true_accept_probability, (float, float, int)),
}
