"""Median and interquartile-range estimators over an interval partition.

Both read the partition's quantile function at fixed levels, so each costs
three binary searches at most. If the partition is within Kolmogorov
distance ``eps < 1/8`` of N(mu, sigma^2) the estimates obey the bounds
returned by :func:`median_bounds` and :func:`iqr_sigma_bounds`.
"""

import math
from dataclasses import dataclass
from typing import Tuple

from .distributions import erf_inv
from .interval_partition import IntervalPartition, inv_cdf

ERF_INV_HALF = float(erf_inv(0.5))
# IQR of N(0, 1), i.e. 2 sqrt(2) erf^{-1}(1/2)
IQR_STANDARD_NORMAL = 2.0 * math.sqrt(2.0) * ERF_INV_HALF


@dataclass(frozen=True)
class RobustEstimate:
    value: float
    lemma_halfwidth: float


def median_estimate(p: IntervalPartition) -> float:
    return inv_cdf(p, 0.5)


def iqr_sigma_estimate(p: IntervalPartition) -> float:
    """Scale estimate: the partition's IQR divided by the IQR of N(0, 1)."""
    return (inv_cdf(p, 0.75) - inv_cdf(p, 0.25)) / IQR_STANDARD_NORMAL


def median_bounds(mu: float, sigma: float, eps: float) -> Tuple[float, float]:
    """Interval guaranteed to hold the median estimate."""
    half = 2.0 * math.sqrt(2.0) * eps * sigma
    return mu - half, mu + half


def iqr_sigma_bounds(sigma: float, eps: float) -> Tuple[float, float]:
    """Interval guaranteed to hold the IQR scale estimate (asymmetric)."""
    return (
        sigma - 5.0 / (2.0 * ERF_INV_HALF) * eps * sigma,
        sigma + 7.0 / (2.0 * ERF_INV_HALF) * eps * sigma,
    )


def robust_median(p: IntervalPartition, eps: float, sigma: float) -> RobustEstimate:
    return RobustEstimate(median_estimate(p), 2.0 * math.sqrt(2.0) * eps * sigma)


def robust_sigma(p: IntervalPartition, eps: float, sigma: float) -> RobustEstimate:
    """IQR estimate with the wider (upper) side of its guarantee as halfwidth."""
    return RobustEstimate(iqr_sigma_estimate(p), 7.0 / (2.0 * ERF_INV_HALF) * eps * sigma)
