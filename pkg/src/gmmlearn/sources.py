"""Sample streams: objects with ``draw(n) -> ndarray`` and a draw counter."""

from typing import Protocol, Sequence

import numpy as np

from .distributions import Mixture, sample_mixture


class SampleShortfallError(RuntimeError):
    """A finite sample source ran out."""

    def __init__(self, requested: int, available: int, consumed: int):
        self.requested = requested
        self.available = available
        self.consumed = consumed
        super().__init__(
            f"sample source exhausted: needed {consumed + requested} samples in total "
            f"({requested} more), only {consumed + available} available"
        )


class SampleSource(Protocol):
    drawn: int

    def draw(self, n: int) -> np.ndarray: ...


class MixtureSource:
    """Unlimited i.i.d. draws from a mixture, seeded."""

    def __init__(self, mixture: Mixture, seed=None, rng: np.random.Generator = None):
        self.mixture = mixture
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.drawn = 0

    def draw(self, n: int) -> np.ndarray:
        self.drawn += n
        return sample_mixture(self.mixture, self.rng, n)


class ArraySource:
    """Consumes a fixed array front to back; raises on exhaustion."""

    def __init__(self, samples: Sequence[float]):
        self.samples = np.asarray(samples, dtype=float)
        self.drawn = 0

    @property
    def remaining(self) -> int:
        return self.samples.size - self.drawn

    def draw(self, n: int) -> np.ndarray:
        if n > self.remaining:
            raise SampleShortfallError(n, self.remaining, self.drawn)
        out = self.samples[self.drawn:self.drawn + n]
        self.drawn += n
        return out


class FunctionSource:
    """Wraps ``sampler(rng, n)`` with a seeded generator."""

    def __init__(self, sampler, seed=None, rng: np.random.Generator = None):
        self.sampler = sampler
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.drawn = 0

    def draw(self, n: int) -> np.ndarray:
        self.drawn += n
        return np.asarray(self.sampler(self.rng, n))
