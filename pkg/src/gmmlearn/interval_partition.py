"""Discrete CDFs stored as value-labelled sub-intervals of [0, 1].

A partition with intervals ``[l_i, r_i)`` and values ``v_1 < ... < v_n``
represents the distribution putting mass ``r_i - l_i`` on ``v_i``.
Quantile queries are a binary search on the left endpoints.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .distributions import DomainError, Gaussian, normal_cdf


class EmptyPartitionError(ValueError):
    """Raised when a partition would have no intervals."""


@dataclass(frozen=True, eq=False)
class IntervalPartition:
    """Immutable n-interval partition.

    Attributes:
        left: left endpoints, ``left[0] == 0``.
        right: right endpoints, ``right[-1] == 1``; ``right[i] == left[i+1]``.
        values: strictly increasing support points.
    """

    left: np.ndarray
    right: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for name in ("left", "right", "values"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.values.size
        if n == 0:
            raise EmptyPartitionError("partition needs at least one interval")
        if self.left.size != n or self.right.size != n:
            raise ValueError("left, right and values must have equal length")
        if self.left[0] != 0.0 or self.right[-1] != 1.0:
            raise ValueError("intervals must cover [0, 1]")
        if np.any(self.right <= self.left):
            raise ValueError("every interval needs right > left")
        if np.any(self.left[1:] != self.right[:-1]):
            raise ValueError("intervals must be contiguous")
        if np.any(np.diff(self.values) <= 0):
            raise ValueError("values must be strictly increasing")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def masses(self) -> np.ndarray:
        return self.right - self.left

    def inv_cdf(self, u):
        return inv_cdf(self, u)

    def cdf(self, x):
        return eval_cdf(self, x)

    def dump(self) -> str:
        """Text form, one ``left right value`` line per interval."""
        return "".join(f"{l!r} {r!r} {v!r}\n" for l, r, v in zip(self.left.tolist(), self.right.tolist(), self.values.tolist()))

    @classmethod
    def load(cls, text: str) -> "IntervalPartition":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        arr = np.array(rows, dtype=float).reshape(-1, 3)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2])


def from_masses(values: Sequence[float], masses: Sequence[float]) -> IntervalPartition:
    """Partition from support points and their (positive) masses."""
    masses = np.asarray(masses, dtype=float)
    edges = np.concatenate([[0.0], np.cumsum(masses)])
    edges = edges / edges[-1]
    edges[-1] = 1.0
    return IntervalPartition(edges[:-1], edges[1:], np.asarray(values, dtype=float))


def build_empirical(samples: Iterable[float]) -> IntervalPartition:
    """Empirical CDF of ``samples``; tied values share one wider interval.

    :raises EmptyPartitionError: on empty input.
    :raises ValueError: on non-finite samples.
    """
    xs = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples, dtype=float).ravel()
    if xs.size == 0:
        raise EmptyPartitionError("cannot build an empirical CDF from no samples")
    if not np.all(np.isfinite(xs)):
        raise ValueError("samples must be finite")
    values, counts = np.unique(xs, return_counts=True)
    cum = np.cumsum(counts)
    right = cum / xs.size
    right[-1] = 1.0
    left = np.concatenate([[0.0], right[:-1]])
    return IntervalPartition(left, right, values)


def inv_cdf(p: IntervalPartition, u):
    """Value of the interval containing ``u``; ``u = 1`` maps to the last one.

    :raises DomainError: if ``u`` is outside [0, 1].
    """
    us = np.asarray(u, dtype=float)
    if np.any(~((us >= 0.0) & (us <= 1.0))):
        raise DomainError("inv_cdf needs u in [0, 1]")
    idx = np.searchsorted(p.left, us, side="right") - 1
    out = p.values[idx]
    return float(out) if us.ndim == 0 else out


def eval_cdf(p: IntervalPartition, x):
    """Mass of values ``<= x`` (right endpoint of the last such interval)."""
    xs = np.asarray(x, dtype=float)
    idx = np.searchsorted(p.values, xs, side="right") - 1
    out = np.where(idx >= 0, p.right[np.maximum(idx, 0)], 0.0)
    return float(out) if xs.ndim == 0 else out


def sample_partition(p: IntervalPartition, rng: np.random.Generator, size=None):
    """Inverse-transform draw: ``inv_cdf(p, u)`` for fresh uniforms ``u``."""
    return inv_cdf(p, rng.random(size))


def kolmogorov_to_cdf(p: IntervalPartition, cdf: Callable) -> float:
    """sup_x |F_p(x) - F(x)| for a continuous CDF ``F``.

    The step CDF jumps from ``left_i`` to ``right_i`` at ``values_i``, so the
    supremum is attained on one side of a jump.
    """
    f = np.asarray(cdf(p.values), dtype=float)
    return float(max(np.max(np.abs(p.right - f)), np.max(np.abs(p.left - f))))


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous step function.

    ``levels[0]`` holds on ``(-inf, breakpoints[0])`` and ``levels[i]`` on
    ``[breakpoints[i-1], breakpoints[i])``, so there is one more level than
    breakpoints.
    """

    breakpoints: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        b = np.array(self.breakpoints, dtype=float)
        lv = np.array(self.levels, dtype=float)
        if lv.size != b.size + 1:
            raise ValueError("need exactly one more level than breakpoints")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        b.setflags(write=False)
        lv.setflags(write=False)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "levels", lv)

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        out = self.levels[np.searchsorted(self.breakpoints, xs, side="right")]
        return float(out) if xs.ndim == 0 else out


def monotonize(f: StepFunction) -> StepFunction:
    """Running supremum ``x -> sup_{y <= x} f(y)``, one pass."""
    return StepFunction(f.breakpoints, np.maximum.accumulate(f.levels))


def subtract_component(p: IntervalPartition, w: float, g: Gaussian) -> IntervalPartition:
    """Partition of the monotonized, renormalized ``F - w * Phi_g``.

    Interval ``i`` becomes ``[m, r_i - w Phi_g(v_i))`` where ``m`` is the
    running maximum so far (starting at 0); intervals that come out empty are
    dropped and the survivors are rescaled so the last right endpoint is 1.

    :raises ValueError: if ``w >= 1`` or ``w < 0``.
    :raises EmptyPartitionError: if every interval is dropped (cannot happen
        for ``w < 1``, since the last difference is at least ``1 - w``; kept as
        a guard against invalid input).
    """
    if not 0.0 <= w < 1.0:
        raise ValueError(f"subtracted weight must lie in [0, 1), got {w}")
    if w == 0.0:
        return p
    d = p.right - w * normal_cdf((p.values - g.mu) / g.sigma)
    prev = np.concatenate([[0.0], np.maximum.accumulate(np.maximum(d, 0.0))[:-1]])
    keep = d > prev
    if not keep.any():
        raise EmptyPartitionError("every interval became degenerate after subtraction")
    vals = p.values[keep]
    right = d[keep] / d[keep][-1]
    right[-1] = 1.0
    # rescaling can collapse a sliver interval to zero width; drop it
    ok = right > np.concatenate([[0.0], right[:-1]])
    right, vals = right[ok], vals[ok]
    left = np.concatenate([[0.0], right[:-1]])
    return IntervalPartition(left, right, vals)
