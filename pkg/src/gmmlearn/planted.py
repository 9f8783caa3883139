"""Planted hypothesis-selection instances on a finite domain.

The target is a probability vector ``p`` on ``{0, ..., K-1}``. One hypothesis
is a perturbation of ``p`` at a chosen total variation distance; the others
move a large fraction of mass onto a single point and are therefore far.
All distances are exact: ``d_TV(p, q) = sum|p - q| / 2``.
"""

from dataclasses import dataclass

import numpy as np

from .selection import DiscretePool
from .sources import FunctionSource


def discrete_tv(p, q) -> np.ndarray:
    """Exact total variation between rows of ``p`` and ``q`` (broadcasting)."""
    return 0.5 * np.abs(np.asarray(p, float) - np.asarray(q, float)).sum(axis=-1)


def perturb(p: np.ndarray, tv: float, rng: np.random.Generator) -> np.ndarray:
    """A probability vector at total variation exactly ``tv`` from ``p``.

    Mass ``tv`` is moved from the largest entries to the smallest ones, in
    random proportions, never taking an entry below zero.
    """
    p = np.asarray(p, float)
    order = np.argsort(p)
    half = p.size // 2
    donors, takers = order[half:], order[:half]
    if tv > p[donors].sum():
        raise ValueError("requested distance exceeds the mass available to move")
    q = p.copy()
    share = rng.dirichlet(np.ones(donors.size))
    take = np.minimum(share * tv, p[donors])
    # top up from whichever donors still have room
    short = tv - take.sum()
    for i in np.argsort(-(p[donors] - take)):
        if short <= 0:
            break
        extra = min(short, p[donors][i] - take[i])
        take[i] += extra
        short -= extra
    q[donors] -= take
    q[takers] += rng.dirichlet(np.ones(takers.size)) * take.sum()
    return q


def spike(p: np.ndarray, point: int, strength: float) -> np.ndarray:
    """``(1 - strength) p + strength * indicator(point)``."""
    q = (1.0 - strength) * np.asarray(p, float)
    q[point] += strength
    return q


@dataclass
class PlantedInstance:
    """Target ``p``, hypothesis matrix ``pmfs`` and exact distances ``tv``."""

    p: np.ndarray
    pmfs: np.ndarray
    close_index: int
    tv: np.ndarray

    @property
    def pool(self) -> DiscretePool:
        return DiscretePool(self.pmfs)

    def source(self, seed=None) -> FunctionSource:
        cdf = np.cumsum(self.p)
        cdf[-1] = 1.0
        return FunctionSource(lambda rng, n: np.searchsorted(cdf, rng.random(n), side="right"), seed=seed)


def planted_instance(n: int, eps: float, seed=None, k: int = 20, close_tv: float = None, far_min: float = 0.55) -> PlantedInstance:
    """``n`` hypotheses: one at distance ``close_tv`` (default ``eps/2``), the rest far.

    Far hypotheses are spikes of strength in ``[far_min, 1]`` at random
    points; with a near-uniform target their distance is about
    ``strength * (1 - 1/k)``. The close hypothesis sits at a random position.
    """
    if n < 1:
        raise ValueError("need at least one hypothesis")
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.full(k, 20.0))
    close_tv = eps / 2.0 if close_tv is None else close_tv
    pmfs = np.empty((n, k))
    close = int(rng.integers(n))
    for i in range(n):
        if i == close:
            pmfs[i] = perturb(p, close_tv, rng)
        else:
            pmfs[i] = spike(p, int(rng.integers(k)), rng.uniform(far_min, 1.0))
    return PlantedInstance(p, pmfs, close, discrete_tv(p, pmfs))
