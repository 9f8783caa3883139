"""Candidate two-component mixtures from a sample budget.

Enumeration: a grid of weights for the component with the smaller
``sigma / w`` ratio, sampled points as its mean, a multiplicative grid of
scales around the nearest-sample statistic, and the other component
recovered by subtracting the first from the empirical CDF and reading off
the median and IQR of what is left. A single-Gaussian candidate covers the
case of one negligible component.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np
from scipy.special import ndtr

from .distributions import Gaussian, Mixture
from .interval_partition import IntervalPartition, build_empirical, subtract_component
from .nearest_sample import (
    DEFAULT_CONSTANTS,
    GridMode,
    GridSpec,
    ScaleConstants,
    make_grid,
    nearest_distance,
    scale_sample_count,
    sigma_candidate_interval,
)
from .robust_stats import IQR_STANDARD_NORMAL, iqr_sigma_estimate, median_estimate
from .sources import SampleSource

log = logging.getLogger(__name__)

MEAN_COUNT_NUMERATOR = 40.0 * math.sqrt(2.0) / 3.0


class Provenance(Enum):
    TWO_COMPONENT = "two"
    SINGLE_COMPONENT = "single"


class Branch(Enum):
    FIRST_SMALLER = "first"
    SECOND_SMALLER = "second"


@dataclass(frozen=True)
class CandidateMixture:
    w_hat: float
    mu1_hat: float
    sigma1_hat: float
    mu2_hat: float
    sigma2_hat: float
    provenance: Provenance = Provenance.TWO_COMPONENT
    branch: Branch = Branch.FIRST_SMALLER

    def __post_init__(self):
        if not 0.0 <= self.w_hat <= 1.0:
            raise ValueError(f"w_hat must lie in [0, 1], got {self.w_hat}")
        if not (self.sigma1_hat > 0 and self.sigma2_hat > 0):
            raise ValueError("candidate scales must be positive")

    @property
    def params(self) -> Tuple[float, float, float, float, float]:
        return self.w_hat, self.mu1_hat, self.sigma1_hat, self.mu2_hat, self.sigma2_hat

    def to_mixture(self) -> Mixture:
        return Mixture.two(*self.params)


@dataclass(frozen=True)
class GenerationBudget:
    """Accuracy, confidence and per-step tuning of candidate generation.

    Each enumeration step gets its own accuracy, a fixed multiple of ``eps``:

    Attributes:
        eps: target total variation accuracy.
        delta: overall failure probability.
        mean_eps_factor: mean candidates are drawn for accuracy ``eps * factor``.
        sigma_eps_factor: ratio of the multiplicative scale grid is ``eps * factor``.
        dkw_eps_factor: Kolmogorov accuracy of the shared empirical CDF.
        dkw_delta: failure probability of the empirical CDF in one repetition.
        *_multiplier: extra factors (>= 1) on the corresponding sample counts.
    """

    eps: float
    delta: float
    mean_eps_factor: float = 20.0
    sigma_eps_factor: float = 6.0
    dkw_eps_factor: float = 0.3
    dkw_delta: float = 0.05
    mean_count_multiplier: float = 1.0
    scale_count_multiplier: float = 1.0
    dkw_count_multiplier: float = 1.0
    constants: ScaleConstants = field(default=DEFAULT_CONSTANTS)

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        for name in ("mean_count_multiplier", "scale_count_multiplier", "dkw_count_multiplier"):
            if getattr(self, name) < 1.0:
                raise ValueError(f"{name} must be >= 1")

    @property
    def mean_eps(self) -> float:
        return self.eps * self.mean_eps_factor

    @property
    def sigma_eps(self) -> float:
        return self.eps * self.sigma_eps_factor

    @property
    def dkw_eps(self) -> float:
        return self.eps * self.dkw_eps_factor

    @property
    def repetitions(self) -> int:
        return max(1, math.ceil(math.log(1.0 / self.delta) / math.log(5.0) - 1e-12))

    def dkw_count(self) -> int:
        n = math.log(2.0 / self.dkw_delta) / (2.0 * self.dkw_eps ** 2)
        return math.ceil(n * self.dkw_count_multiplier)

    def mean_count(self, w_hat: float) -> int:
        return math.ceil(mean_candidate_count(w_hat, self.mean_eps) * self.mean_count_multiplier)

    def scale_count(self, w_hat: float) -> int:
        return math.ceil(scale_sample_count(w_hat, self.constants) * self.scale_count_multiplier)

    def weights(self) -> np.ndarray:
        return weight_grid(self.eps)

    def samples_per_repetition(self) -> int:
        ws = self.weights()
        return self.dkw_count() + sum(self.mean_count(w) + self.scale_count(w) for w in ws)


def weight_grid(eps: float) -> np.ndarray:
    """``t * eps`` for ``t = 1 .. ceil(1/eps) - 1``."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    t = np.arange(1, math.ceil(1.0 / eps - 1e-12))
    return t * eps


def mean_candidate_count(w_hat: float, eps: float) -> int:
    return math.ceil(MEAN_COUNT_NUMERATOR / (w_hat * eps))


def mean_candidates(w_hat: float, eps: float, source: SampleSource) -> np.ndarray:
    """Fresh samples used verbatim as candidate means."""
    if not 0.0 < w_hat <= 1.0:
        raise ValueError(f"w_hat must lie in (0, 1], got {w_hat}")
    return np.asarray(source.draw(mean_candidate_count(w_hat, eps)), dtype=float)


def sigma_grid(
    mu1_hat: float, scale_samples: np.ndarray, eps: float, constants: ScaleConstants = DEFAULT_CONSTANTS
) -> np.ndarray:
    """Multiplicative grid over the scale range implied by the nearest sample.

    Returns an empty array when a sample coincides with ``mu1_hat``.
    """
    y = nearest_distance(mu1_hat, scale_samples)
    if y <= 0.0:
        return np.empty(0)
    lo, hi = sigma_candidate_interval(y, 2, constants)
    return make_grid(GridSpec(lo, hi, eps, GridMode.MULTIPLICATIVE))


def sigma1_candidates(
    w_hat: float,
    mu1_hat: float,
    eps: float,
    source: SampleSource,
    constants: ScaleConstants = DEFAULT_CONSTANTS,
) -> np.ndarray:
    samples = source.draw(scale_sample_count(w_hat, constants))
    return sigma_grid(mu1_hat, samples, eps, constants)


def last_component(
    w_hat: float, mu1_hat: float, sigma1_hat: float, empirical: IntervalPartition
) -> Tuple[float, float]:
    """(median, IQR scale) of the empirical CDF with component 1 subtracted."""
    rest = subtract_component(empirical, w_hat, Gaussian(mu1_hat, sigma1_hat))
    return median_estimate(rest), iqr_sigma_estimate(rest)


def complete_batch(
    empirical: IntervalPartition, w_hat: float, mu1_hat: float, sigmas: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """:func:`last_component` for many scales at once.

    After subtraction the surviving intervals are exactly those where
    ``D_i = r_i - w Phi(v_i)`` exceeds every earlier ``D_j`` (and 0), and the
    normalizer is ``max_i D_i``. The quantile at level ``u`` is therefore
    the value at the first index with ``D_i > u * max D``.

    :return: ``(mu2, sigma2, ok)``; ``ok`` is False where the subtraction left
        nothing or the IQR collapsed to zero.
    """
    v = empirical.values
    d = empirical.right[None, :] - w_hat * ndtr((v[None, :] - mu1_hat) / sigmas[:, None])
    top = d.max(axis=1)
    ok = top > 0.0
    q = []
    for u in (0.25, 0.5, 0.75):
        q.append(v[np.argmax(d > (u * top)[:, None], axis=1)])
    sigma2 = (q[2] - q[0]) / IQR_STANDARD_NORMAL
    ok &= sigma2 > 0.0
    return q[1], sigma2, ok


def single_component_candidate(empirical: IntervalPartition) -> CandidateMixture:
    mu, sigma = median_estimate(empirical), iqr_sigma_estimate(empirical)
    if not sigma > 0.0:
        # all probability on a single value; any positive scale is as good
        sigma = float(np.finfo(float).tiny) if len(empirical) == 1 else _min_gap(empirical)
    return CandidateMixture(1.0, mu, sigma, mu, sigma, Provenance.SINGLE_COMPONENT, Branch.FIRST_SMALLER)


def _min_gap(p: IntervalPartition) -> float:
    return float(np.min(np.diff(p.values)))


@dataclass
class GenerationReport:
    """Counters filled in by :func:`generate_all`."""

    samples_drawn: int = 0
    triples: int = 0
    skipped_degenerate: int = 0
    skipped_incomplete: int = 0
    repetitions: int = 0


def _one_repetition(samples: np.ndarray, budget: GenerationBudget, report: GenerationReport) -> List[CandidateMixture]:
    ws = budget.weights()
    dkw_n = budget.dkw_count()
    empirical = build_empirical(samples[:dkw_n])
    pos = dkw_n
    out: List[CandidateMixture] = []
    for w in ws:
        w = float(w)
        n_mean, n_scale = budget.mean_count(w), budget.scale_count(w)
        means = samples[pos:pos + n_mean]
        pos += n_mean
        scale_samples = np.sort(samples[pos:pos + n_scale])
        pos += n_scale
        for mu1 in means:
            mu1 = float(mu1)
            sig = sigma_grid(mu1, scale_samples, budget.sigma_eps, budget.constants)
            if sig.size == 0:
                report.skipped_degenerate += 1
                log.debug("skipping mean %r: a scale sample coincides with it", mu1)
                continue
            mu2, s2, ok = complete_batch(empirical, w, mu1, sig)
            report.triples += sig.size
            report.skipped_incomplete += int(np.count_nonzero(~ok))
            for s1, m2, t2 in zip(sig[ok].tolist(), mu2[ok].tolist(), s2[ok].tolist()):
                out.append(CandidateMixture(w, mu1, s1, m2, t2, Provenance.TWO_COMPONENT, Branch.FIRST_SMALLER))
                out.append(CandidateMixture(1.0 - w, m2, t2, mu1, s1, Provenance.TWO_COMPONENT, Branch.SECOND_SMALLER))
    out.append(single_component_candidate(empirical))
    return out


def generate_all(source: SampleSource, budget: GenerationBudget, report: GenerationReport = None) -> List[CandidateMixture]:
    """All candidates for ``budget``; samples are drawn up front per repetition.

    The list is ordered by repetition, weight, mean sample, scale and branch,
    with the single-Gaussian candidate closing each repetition.
    """
    if report is None:
        report = GenerationReport()
    out: List[CandidateMixture] = []
    per_rep = budget.samples_per_repetition()
    for _ in range(budget.repetitions):
        samples = np.asarray(source.draw(per_rep), dtype=float)
        report.samples_drawn += per_rep
        report.repetitions += 1
        out.extend(_one_repetition(samples, budget, report))
    return out


def enumerate_from_samples(samples: np.ndarray, budget: GenerationBudget) -> List[CandidateMixture]:
    """One repetition's candidates as a pure function of its drawn samples."""
    if samples.size < budget.samples_per_repetition():
        raise ValueError(f"need {budget.samples_per_repetition()} samples, got {samples.size}")
    return _one_repetition(np.asarray(samples, dtype=float), budget, GenerationReport())
