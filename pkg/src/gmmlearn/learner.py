"""End-to-end learner: candidate generation followed by a tournament."""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .candidates import CandidateMixture, GenerationBudget, GenerationReport, generate_all
from .selection import MixturePool, TournamentConfig, TournamentStats, select

log = logging.getLogger(__name__)

MAX_EPS = 1.0 / 8.0


class ValidationError(ValueError):
    """Invalid learner or harness parameters."""


@dataclass
class LearnResult:
    """Outcome of :func:`learn`.

    ``mixture`` is None when the tournament failed; ``candidates`` is always
    the full (deduplicated) list that entered the tournament.
    """

    mixture: Optional[CandidateMixture]
    candidates: List[CandidateMixture]
    candidate_count: int
    samples_used: int
    selection_engine: str
    diagnostics: Dict[str, float] = field(default_factory=dict)
    tournament: Optional[TournamentStats] = None

    @property
    def failed(self) -> bool:
        return self.mixture is None


class _CountingSource:
    def __init__(self, inner):
        self.inner = inner
        self.drawn = 0

    def draw(self, n):
        out = self.inner.draw(n)
        self.drawn += n
        return out


def check_accuracy(eps: float, delta: float):
    if not 0.0 < eps <= MAX_EPS:
        raise ValidationError(f"eps must lie in (0, 1/8] (robust median/IQR bounds need eps < 1/8), got {eps}")
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")


def dedupe(candidates: List[CandidateMixture]) -> List[CandidateMixture]:
    """Drop candidates whose parameters repeat an earlier one, keeping order."""
    if not candidates:
        return []
    params = np.array([c.params for c in candidates], dtype=float)
    _, first = np.unique(params, axis=0, return_index=True)
    return [candidates[i] for i in np.sort(first)]


def learn(source, eps: float, delta: float, config: TournamentConfig = None, budget: GenerationBudget = None) -> LearnResult:
    """Learn a two-component mixture from ``source``.

    :param source: sample stream with ``draw(n)``; the tournament reads from it too.
    :param eps: target accuracy, at most 1/8.
    :param delta: failure probability, split evenly between the two stages.
    :param config: tournament settings; its ``eps``/``delta`` are overridden
        by ``eps`` and ``delta / 2``.
    :param budget: generation settings; defaults to ``GenerationBudget(eps, delta / 2)``.
    """
    check_accuracy(eps, delta)
    if config is None:
        config = TournamentConfig(eps=eps, delta=delta / 2.0)
    else:
        config = TournamentConfig(eps=eps, delta=delta / 2.0, engine=config.engine, gamma=config.gamma, seed=config.seed)
    if budget is None:
        budget = GenerationBudget(eps, delta / 2.0)
    src = _CountingSource(source)
    diag: Dict[str, float] = {}

    t0 = time.perf_counter()
    report = GenerationReport()
    candidates = dedupe(generate_all(src, budget, report))
    diag["generate_s"] = time.perf_counter() - t0
    diag["generation_samples"] = float(report.samples_drawn)
    log.info("generated %d distinct candidates from %d samples", len(candidates), report.samples_drawn)

    t1 = time.perf_counter()
    result = select(src, MixturePool.from_candidates(candidates), config)
    diag["select_s"] = time.perf_counter() - t1
    diag["selection_samples"] = float(result.stats.x_samples)
    if result.failed:
        log.warning("tournament produced no winner among %d candidates", len(candidates))
    return LearnResult(
        mixture=None if result.failed else candidates[result.index],
        candidates=candidates,
        candidate_count=len(candidates),
        samples_used=src.drawn,
        selection_engine=config.label,
        diagnostics=diag,
        tournament=result.stats,
    )
