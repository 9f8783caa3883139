"""Scale estimation from the distance between a location estimate and the
closest of a handful of samples, plus the grids that turn a range of
plausible values into a finite candidate list.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from .distributions import DomainError


@dataclass(frozen=True)
class ScaleConstants:
    """Constants of the nearest-sample argument.

    ``c1/n`` and ``c2/n`` bracket the CDF distance from a point to its nearest
    sample; ``c3`` is derived from them.
    """

    c1: float = 1.0 / 40.0
    c2: float = 19.0 / 2.0
    c3: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.c1 < self.c2:
            raise ValueError("need 0 < c1 < c2")
        object.__setattr__(self, "c3", self.c1 / (9.0 * math.sqrt(2.0) * self.c2))


DEFAULT_CONSTANTS = ScaleConstants()


def nearest_distance(x: float, samples: Sequence[float]) -> float:
    """min_i |samples_i - x|."""
    xs = np.asarray(samples, dtype=float)
    if xs.size == 0:
        raise ValueError("nearest_distance needs at least one sample")
    return float(np.min(np.abs(xs - x)))


def nearest_distance_sorted(x: float, sorted_samples: np.ndarray) -> float:
    """Same as :func:`nearest_distance` for pre-sorted samples, O(log n)."""
    i = int(np.searchsorted(sorted_samples, x))
    best = math.inf
    if i < sorted_samples.size:
        best = sorted_samples[i] - x
    if i > 0:
        best = min(best, x - sorted_samples[i - 1])
    return float(best)


def scale_sample_count(w_hat: float, constants: ScaleConstants = DEFAULT_CONSTANTS) -> int:
    """Samples needed so the nearest one lands in the useful distance band."""
    if not w_hat > 0.0:
        raise DomainError(f"weight estimate must be > 0, got {w_hat}")
    return math.ceil(9.0 * math.sqrt(math.pi) * constants.c2 / (2.0 * w_hat))


def sigma_candidate_interval(
    y: float, k: int = 2, constants: ScaleConstants = DEFAULT_CONSTANTS
) -> Tuple[float, float]:
    """Range for sigma given the nearest-sample distance ``y`` in a ``k``-mixture."""
    if not y > 0.0:
        raise DomainError(f"nearest-sample distance must be > 0, got {y}")
    if k < 1:
        raise DomainError("k must be >= 1")
    a = constants.c3 / (2.0 * k)
    return y / (math.sqrt(2.0) + a), y / a


class GridMode(Enum):
    ADDITIVE_RELATIVE = "additive_relative"
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE_ABSOLUTE = "additive_absolute"


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    eps: float
    mode: GridMode = GridMode.MULTIPLICATIVE

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError(f"grid needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if not self.eps > 0.0:
            raise ValueError("grid eps must be > 0")
        if self.mode is not GridMode.ADDITIVE_ABSOLUTE and not self.lo > 0.0:
            raise ValueError("relative grids need lo > 0")


def make_grid(spec: GridSpec) -> np.ndarray:
    """Grid from ``lo`` upward, ending at the first point >= ``hi``."""
    lo, hi, eps = spec.lo, spec.hi, spec.eps
    # 1e-9 slack keeps an exact hit on hi (e.g. 1 * 2^1 = 2) from adding a step
    if spec.mode is GridMode.MULTIPLICATIVE:
        steps = math.ceil(math.log(hi / lo) / math.log1p(eps) - 1e-9)
        pts = lo * (1.0 + eps) ** np.arange(steps + 1)
    elif spec.mode is GridMode.ADDITIVE_RELATIVE:
        steps = math.ceil((hi - lo) / (eps * lo) - 1e-9)
        pts = lo * (1.0 + eps * np.arange(steps + 1))
    else:
        steps = math.ceil((hi - lo) / eps - 1e-9)
        pts = lo + eps * np.arange(steps + 1)
    pts[-1] = max(pts[-1], hi)
    return pts


def grid_count_bound(spec: GridSpec) -> float:
    lo, hi, eps = spec.lo, spec.hi, spec.eps
    if spec.mode is GridMode.MULTIPLICATIVE:
        return math.log(hi / lo) / math.log1p(eps) + 2
    if spec.mode is GridMode.ADDITIVE_RELATIVE:
        return (hi - lo) / (eps * lo) + 2
    return (hi - lo) / eps + 2
