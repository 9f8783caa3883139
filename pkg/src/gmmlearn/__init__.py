"""Proper learning of two-Gaussian mixtures and fast hypothesis selection."""

from .candidates import CandidateMixture, GenerationBudget, generate_all
from .distributions import Gaussian, Mixture, erf, erf_inv, kolmogorov_numeric, tv_numeric
from .interval_partition import IntervalPartition, build_empirical
from .learner import LearnResult, learn
from .selection import (
    CompetitionOutcome,
    Hypothesis,
    Result,
    TournamentConfig,
    choose_hypothesis,
    fast_tournament,
    recursive_slow_tournament,
    select,
    slow_tournament,
)
from .sources import ArraySource, MixtureSource

__all__ = [
    "ArraySource", "CandidateMixture", "CompetitionOutcome", "Gaussian", "GenerationBudget",
    "Hypothesis", "IntervalPartition", "LearnResult", "Mixture", "MixtureSource", "Result",
    "TournamentConfig", "build_empirical", "choose_hypothesis", "erf", "erf_inv", "fast_tournament",
    "generate_all", "kolmogorov_numeric", "learn", "recursive_slow_tournament", "select",
    "slow_tournament", "tv_numeric",
]
