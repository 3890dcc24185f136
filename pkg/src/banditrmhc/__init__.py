"""Random mutation hill-climbing with bandit-driven choice of the bit to flip."""
from .bandit import GeneBanditArray, select_gene, urgency
from .climbers import RunConfig, RunOutcome, SelectionPolicy, run, run_noise_free, run_noisy
from .fitness import ProblemKind, ProblemSpec

__version__ = "0.1.0"

__all__ = [
    "GeneBanditArray",
    "ProblemKind",
    "ProblemSpec",
    "RunConfig",
    "RunOutcome",
    "SelectionPolicy",
    "run",
    "run_noise_free",
    "run_noisy",
    "select_gene",
    "urgency",
]
