"""Hypothesis selection from samples and pairwise density comparisons.

Every pairwise decision is made by :func:`choose_hypothesis`: the set where
the first density exceeds the second is estimated under the target and
under both hypotheses, and the pair is declared a win, a loss or a draw.
Three tournaments are built on top of it:

* :func:`slow_tournament` runs every pair once and returns a hypothesis that
  never lost;
* :func:`fast_tournament` interleaves two strategies (a random-subset slow
  tournament and a knockout phase followed by a slow tournament on the
  survivors) inside two variants and returns whichever variant finishes
  first;
* :func:`recursive_slow_tournament` splits the hypotheses into about
  ``sqrt(N)`` groups, finds each group's winner and then runs a tournament
  over the winners, recursively.

Hypotheses are held in pools that evaluate many densities and draw many
samples at once. Tournaments are generators that yield how many
competitions they just completed, which lets the fast tournament advance
its two variants in lockstep.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterator, List, Optional, Sequence

import numpy as np

from .distributions import LOG_SQRT_2PI, Mixture

log = logging.getLogger(__name__)

# Rows times sample count processed per vectorized chunk.
_CHUNK_ELEMENTS = 1 << 21


class Result(IntEnum):
    DRAW = 0
    WIN_FIRST = 1
    WIN_SECOND = 2


@dataclass(frozen=True)
class CompetitionOutcome:
    result: Result
    tau_hat: float
    p1_hat: float
    p2_hat: float


class Hypothesis:
    """A distribution known through a sampler and a density.

    :param sampler: ``sampler(rng, size) -> ndarray`` of draws.
    :param density: ``density(xs) -> ndarray`` evaluated elementwise.
    :param label: free-form identifier.
    """

    def __init__(self, sampler: Callable, density: Callable, label=None):
        self.sampler = sampler
        self.density = density
        self.label = label

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.asarray(self.sampler(rng, size), dtype=float)

    def __repr__(self):
        return f"Hypothesis({self.label!r})"


class MixtureHypothesis(Hypothesis):
    """Two-component mixture hypothesis given by ``(w, mu1, sigma1, mu2, sigma2)``."""

    def __init__(self, params, label=None):
        self.params = tuple(float(p) for p in params)
        self.mixture = Mixture.two(*self.params)
        super().__init__(self.mixture.sample, self.mixture.pdf, label)

    def draw(self, rng, size):
        return _box_muller(np.array([self.params]), rng.random((1, 3, size)))[0]


class DiscreteHypothesis(Hypothesis):
    """Distribution on ``{0, ..., K-1}`` given by its probability vector."""

    def __init__(self, pmf, label=None):
        self.pmf = np.asarray(pmf, dtype=float)
        cdf = np.cumsum(self.pmf)
        cdf[-1] = 1.0
        self.cdf = cdf
        super().__init__(self._sample, self._density, label)

    def _sample(self, rng, size):
        return np.searchsorted(self.cdf, rng.random(size), side="right").astype(float)

    def _density(self, xs):
        return self.pmf[np.asarray(xs, dtype=int)]


def _box_muller(params: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Rows of ``u`` (shape ``(R, 3, m)``) to mixture draws for rows of ``params``."""
    w, m1, s1, m2, s2 = (params[:, i, None] for i in range(5))
    first = u[:, 0, :] < w
    z = np.sqrt(-2.0 * np.log1p(-u[:, 1, :])) * np.cos(2.0 * math.pi * u[:, 2, :])
    return np.where(first, m1 + s1 * z, m2 + s2 * z)


@dataclass
class Block:
    """Samples for several rows, or one shared row.

    ``points`` holds sample locations, ``weights`` their empirical masses
    (``None`` means each point counts ``1/m``). Either may be one-dimensional
    and then applies to every row.
    """

    points: np.ndarray
    weights: Optional[np.ndarray] = None

    def row(self, i: int) -> "Block":
        p = self.points if self.points.ndim == 1 else self.points[i]
        w = self.weights if self.weights is None or self.weights.ndim == 1 else self.weights[i]
        return Block(p, w)

    def rows(self, sel) -> "Block":
        p = self.points if self.points.ndim == 1 else self.points[sel]
        w = self.weights if self.weights is None or self.weights.ndim == 1 else self.weights[sel]
        return Block(p, w)

    def fraction(self, mask: np.ndarray) -> np.ndarray:
        if self.weights is None:
            return mask.mean(axis=-1)
        return (mask * self.weights).sum(axis=-1)


class HypothesisPool:
    """Indexed collection of hypotheses with batched sampling and densities.

    The base class wraps arbitrary :class:`Hypothesis` objects and loops in
    Python; subclasses vectorize.
    """

    def __init__(self, hypotheses: Sequence[Hypothesis]):
        self.hypotheses = list(hypotheses)

    def __len__(self) -> int:
        return len(self.hypotheses)

    def __getitem__(self, i: int) -> Hypothesis:
        return self.hypotheses[i]

    def draw(self, idx: np.ndarray, m: int, rngs: List[np.random.Generator]) -> Block:
        return Block(np.stack([self.hypotheses[i].draw(r, m) for i, r in zip(idx, rngs)]))

    def x_block(self, xs: np.ndarray) -> Block:
        return Block(np.asarray(xs, dtype=float))

    def density(self, idx: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Density of hypothesis ``idx[r]`` at ``points[r]`` (or shared ``points``)."""
        out = []
        for r, i in enumerate(idx):
            p = points if points.ndim == 1 else points[r]
            out.append(np.asarray(self.hypotheses[i].density(p), dtype=float))
        return np.stack(out) if out else np.empty((0, points.shape[-1]))


class MixturePool(HypothesisPool):
    """Two-component Gaussian mixtures stored as a ``(N, 5)`` parameter array."""

    def __init__(self, params):
        self.params = np.asarray(params, dtype=float).reshape(-1, 5)
        w = self.params[:, 0]
        self._c1 = w / self.params[:, 2] * math.exp(-LOG_SQRT_2PI)
        self._c2 = (1.0 - w) / self.params[:, 4] * math.exp(-LOG_SQRT_2PI)

    @classmethod
    def from_candidates(cls, candidates) -> "MixturePool":
        return cls(np.array([c.params for c in candidates], dtype=float))

    def __len__(self) -> int:
        return self.params.shape[0]

    def __getitem__(self, i: int) -> MixtureHypothesis:
        return MixtureHypothesis(self.params[i], label=i)

    def draw(self, idx, m, rngs):
        u = np.stack([r.random((3, m)) for r in rngs])
        return Block(_box_muller(self.params[idx], u))

    def density(self, idx, points):
        p = self.params[idx]
        out = self._component(points, p[:, 1], p[:, 2], self._c1[idx])
        out += self._component(points, p[:, 3], p[:, 4], self._c2[idx])
        return out

    @staticmethod
    def _component(points, mu, sigma, scale):
        # in place to keep temporaries at one (R, m) array
        z = np.subtract(points, mu[:, None])
        z /= sigma[:, None]
        np.square(z, out=z)
        z *= -0.5
        np.exp(z, out=z)
        z *= scale[:, None]
        return z


class DiscretePool(HypothesisPool):
    """Distributions on ``{0, ..., K-1}``; samples are kept as histograms."""

    def __init__(self, pmfs):
        self.pmfs = np.asarray(pmfs, dtype=float)
        self.cdfs = np.cumsum(self.pmfs, axis=1)
        self.cdfs[:, -1] = 1.0
        self.support = np.arange(self.pmfs.shape[1])

    def __len__(self) -> int:
        return self.pmfs.shape[0]

    def __getitem__(self, i: int) -> DiscreteHypothesis:
        return DiscreteHypothesis(self.pmfs[i], label=i)

    def _counts(self, draws: np.ndarray) -> np.ndarray:
        return np.bincount(draws.astype(int), minlength=self.pmfs.shape[1])

    def draw(self, idx, m, rngs):
        k = self.pmfs.shape[1]
        w = np.empty((len(idx), k))
        for r, (i, g) in enumerate(zip(idx, rngs)):
            w[r] = self._counts(np.searchsorted(self.cdfs[i], g.random(m), side="right")) / m
        return Block(self.support, w)

    def x_block(self, xs):
        xs = np.asarray(xs)
        return Block(self.support, self._counts(xs) / xs.size)

    def density(self, idx, points):
        if points.ndim == 1:
            return self.pmfs[idx][:, points.astype(int)]
        return np.take_along_axis(self.pmfs[idx], points.astype(int), axis=1)


def make_pool(hs) -> HypothesisPool:
    """Pick the fastest pool that can hold ``hs``."""
    if isinstance(hs, HypothesisPool):
        return hs
    hs = list(hs)
    if hs and all(isinstance(h, MixtureHypothesis) for h in hs):
        return MixturePool([h.params for h in hs])
    if hs and all(isinstance(h, DiscreteHypothesis) for h in hs):
        sizes = {h.pmf.size for h in hs}
        if len(sizes) == 1:
            return DiscretePool([h.pmf for h in hs])
    return HypothesisPool(hs)


def competition_samples(eps: float, delta: float) -> int:
    """Samples per distribution so a competition errs with probability <= delta."""
    return math.ceil(2.0 / (eps * eps) * math.log(6.0 / delta))


def slow_samples(n: int, eps: float, delta: float) -> int:
    return math.ceil(2.0 / (eps * eps) * math.log(12.0 * n / delta))


def always_draw(eps: float) -> bool:
    """True when no empirical frequencies can get past the first draw test.

    ``p1 - p2 <= 1``, so with ``6 eps >= 1`` every competition is a draw and
    tournaments skip the density work (samples are still accounted for).
    """
    return 6.0 * eps >= 1.0


def decide(tau, p1, p2, eps: float) -> np.ndarray:
    """Vectorized decision rule on the three empirical frequencies."""
    tau, p1, p2 = np.broadcast_arrays(np.asarray(tau, float), np.asarray(p1, float), np.asarray(p2, float))
    out = np.full(tau.shape, Result.DRAW, dtype=np.int8)
    go = p1 - p2 > 6.0 * eps
    first = go & (tau > p1 - 2.0 * eps)
    second = go & ~first & (tau < p2 + 2.0 * eps)
    out[first] = Result.WIN_FIRST
    out[second] = Result.WIN_SECOND
    return out


@dataclass
class TournamentStats:
    """Instrumentation shared by every tournament entry point.

    ``ops`` counts comparator queries: three per sample index per competition
    (one each on the target's, the first and the second hypothesis' draw).
    """

    competitions: int = 0
    ops: int = 0
    x_samples: int = 0
    h_samples: Optional[np.ndarray] = None
    b_rounds: int = 0
    variant: Optional[str] = None
    seconds: float = 0.0

    @property
    def max_h_samples(self) -> int:
        return int(self.h_samples.max()) if self.h_samples is not None and self.h_samples.size else 0


@dataclass
class TournamentResult:
    winner: Optional[Hypothesis]
    index: Optional[int]
    stats: TournamentStats = field(default_factory=TournamentStats)

    @property
    def failed(self) -> bool:
        return self.index is None


class _Arena:
    """Shared state of one tournament run: target stream, pool, seeds, counters."""

    def __init__(self, x, pool: HypothesisPool, seed, stats: TournamentStats):
        self.x = x
        self.pool = pool
        self.root = int(np.random.SeedSequence(seed).generate_state(1, np.uint64)[0])
        self.stats = stats
        self.stats.h_samples = np.zeros(len(pool), dtype=np.int64)
        self._events = 0

    def new_event(self) -> int:
        self._events += 1
        return self._events

    def control_rng(self, event: int) -> np.random.Generator:
        return np.random.default_rng([self.root, event, 0])

    def _h_rng(self, event: int, i: int) -> np.random.Generator:
        return np.random.default_rng([self.root, event, 1, int(i)])

    def draw_x(self, m: int) -> Block:
        self.stats.x_samples += m
        return self.pool.x_block(self.x.draw(m))

    def count_h(self, idx: np.ndarray, m: int):
        np.add.at(self.stats.h_samples, idx, m)

    def draw_h(self, event: int, idx: np.ndarray, m: int, count: bool = True) -> Block:
        """Samples of ``idx`` for ``event``; repeated calls regenerate the same draws."""
        if count:
            self.count_h(idx, m)
        return self.pool.draw(idx, m, [self._h_rng(event, i) for i in idx])

    def tally(self, competitions: int, m: int):
        self.stats.competitions += competitions
        self.stats.ops += 3 * m * competitions


def _pair_outcomes(pool, a, b, xb: Block, ba: Block, bb: Block, eps: float):
    """Decisions for pairs ``(a[r], b[r])`` with per-row samples ``ba``/``bb``."""
    fa_x = pool.density(a, xb.points)
    fb_x = pool.density(b, xb.points)
    tau = xb.fraction(fa_x > fb_x)
    p1 = ba.fraction(pool.density(a, ba.points) > pool.density(b, ba.points))
    p2 = bb.fraction(pool.density(a, bb.points) > pool.density(b, bb.points))
    return decide(tau, p1, p2, eps), tau, p1, p2


def _chunks(n: int, m: int):
    step = max(1, _CHUNK_ELEMENTS // max(m, 1))
    for s in range(0, n, step):
        yield slice(s, min(n, s + step))


def choose_hypothesis(x, h1: Hypothesis, h2: Hypothesis, eps: float, delta: float, seed=None, rngs=None) -> CompetitionOutcome:
    """Compare two hypotheses against samples from ``x``.

    Draws ``m = ceil(2/eps^2 ln(6/delta))`` samples from each of ``x``, ``h1``
    and ``h2``. ``rngs`` may supply the two hypothesis generators directly;
    otherwise they are spawned from ``seed``.
    """
    if not (0 < eps < 1 and 0 < delta < 1):
        raise ValueError("eps and delta must lie in (0, 1)")
    m = competition_samples(eps, delta)
    if rngs is None:
        rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2)]
    xs = np.asarray(x.draw(m), dtype=float)
    s1 = h1.draw(rngs[0], m)
    s2 = h2.draw(rngs[1], m)
    tau = float(np.mean(h1.density(xs) > h2.density(xs)))
    p1 = float(np.mean(h1.density(s1) > h2.density(s1)))
    p2 = float(np.mean(h1.density(s2) > h2.density(s2)))
    return CompetitionOutcome(Result(int(decide(tau, p1, p2, eps))), tau, p1, p2)


# Tournament bodies. Each is a generator yielding the number of competitions
# just completed and returning the winning pool index, or None on failure.

def _slow_gen(ar: _Arena, idx, eps: float, delta: float, xb: Block = None) -> Iterator[int]:
    idx = np.asarray(idx, dtype=np.int64)
    n = idx.size
    if n == 0:
        return None
    if n == 1:
        return int(idx[0])
    m = slow_samples(n, eps, delta)
    if xb is None:
        xb = ar.draw_x(m)
    if always_draw(eps):
        ar.count_h(idx, m)
        for i in range(n - 1):
            ar.tally(n - i - 1, m)
            yield n - i - 1
        return int(idx[0])
    hb = ar.draw_h(ar.new_event(), idx, m)
    pool = ar.pool
    dx = pool.density(idx, xb.points)
    dself = pool.density(idx, hb.points)
    lost = np.zeros(n, dtype=bool)
    wins = np.zeros(n, dtype=np.int64)
    for i in range(n - 1):
        js = slice(i + 1, n)
        cnt = n - i - 1
        tau = xb.fraction(dx[i] > dx[js])
        own = hb.row(i)
        f_j_at_i = pool.density(idx[js], own.points)
        p1 = own.fraction(dself[i] > f_j_at_i)
        rest = hb.rows(js)
        f_i_at_j = pool.density(np.full(cnt, idx[i]), rest.points)
        p2 = rest.fraction(f_i_at_j > dself[js])
        res = decide(tau, p1, p2, eps)
        first, second = res == Result.WIN_FIRST, res == Result.WIN_SECOND
        lost[i] |= bool(second.any())
        lost[js] |= first
        wins[i] += int(first.sum())
        wins[js] += second
        ar.tally(cnt, m)
        yield cnt
    alive = np.flatnonzero(~lost)
    if not alive.size:
        return None
    # any never-loser qualifies; the one with most wins, then lowest position
    return int(idx[alive[np.argmax(wins[alive])]])


def _s1_gen(ar: _Arena, idx, eps: float) -> Iterator[int]:
    idx = np.asarray(idx, dtype=np.int64)
    size = min(idx.size, math.ceil(3.0 * math.sqrt(idx.size)))
    rng = ar.control_rng(ar.new_event())
    subset = idx[np.sort(rng.choice(idx.size, size=size, replace=False))]
    return (yield from _slow_gen(ar, subset, 8.0 * eps, math.exp(-3.0)))


def _s2_gen(ar: _Arena, idx, eps: float) -> Iterator[int]:
    idx = np.asarray(idx, dtype=np.int64)
    n = idx.size
    rounds = max(0, math.floor(math.log2(math.sqrt(n) / 2.0))) if n >= 4 else 0
    m = competition_samples(eps, 1.0 / (3.0 * n))
    event = ar.new_event()
    rng = ar.control_rng(event)
    alive = idx
    if rounds:
        xb = ar.draw_x(m)
    for r in range(rounds):
        alive = alive[rng.permutation(alive.size)]
        npairs = alive.size // 2
        a, b = alive[0:2 * npairs:2], alive[1:2 * npairs:2]
        keep = np.empty(npairs, dtype=np.int64)
        for sl in _chunks(npairs, m):
            ba = ar.draw_h(event, a[sl], m, count=r == 0)
            bb = ar.draw_h(event, b[sl], m, count=r == 0)
            res = _pair_outcomes(ar.pool, a[sl], b[sl], xb, ba, bb, eps)[0]
            # a draw keeps the first of the randomly ordered pair
            keep[sl] = np.where(res == Result.WIN_SECOND, b[sl], a[sl])
            cnt = sl.stop - sl.start
            ar.tally(cnt, m)
            yield cnt
        if alive.size % 2:
            keep = np.append(keep, alive[-1])
        alive = keep
    return (yield from _slow_gen(ar, alive, eps, 0.25))


def _variant_a(ar: _Arena, idx, eps: float, delta: float, final_gamma: Optional[float]) -> Iterator[int]:
    k1 = math.ceil(math.log2(2.0 / delta))
    k2 = math.ceil(math.log(2.0 / delta, 4))
    finalists = []
    for _ in range(k1):
        w = yield from _s1_gen(ar, idx, eps)
        if w is not None:
            finalists.append(w)
    for _ in range(k2):
        w = yield from _s2_gen(ar, idx, eps)
        if w is not None:
            finalists.append(w)
    if not finalists:
        return None
    if final_gamma is None:
        return (yield from _slow_gen(ar, finalists, 64.0 * eps, delta / 2.0))
    return (yield from _recursive_gen(ar, finalists, 64.0 * eps, delta / 2.0, _depth(final_gamma)))


def _variant_b(ar: _Arena, idx, eps: float, delta: float) -> Iterator[int]:
    remaining = np.asarray(idx, dtype=np.int64)
    n0 = remaining.size
    m = competition_samples(64.0 * eps, min(0.5, delta / float(n0) ** 3))
    xb = None
    event = ar.new_event()
    challenged = np.zeros(0, dtype=np.int64)
    while remaining.size:
        ar.stats.b_rounds += 1
        w1 = yield from _s1_gen(ar, remaining, eps)
        w2 = yield from _s2_gen(ar, remaining, eps)
        finalists = [w for w in (w2, w1) if w is not None]
        if not finalists:
            return None
        if xb is None:
            xb = ar.draw_x(m)
        for f in dict.fromkeys(finalists):
            others = remaining[remaining != f]
            if others.size == 0:
                return int(f)
            fresh = np.setdiff1d(np.append(others, f), challenged)
            if fresh.size:
                ar.count_h(fresh, m)
                challenged = np.union1d(challenged, fresh)
            lost_at = None
            for sl in _chunks(others.size, m):
                ob = others[sl]
                if always_draw(64.0 * eps):
                    ar.tally(ob.size, m)
                    yield ob.size
                    continue
                bf = ar.draw_h(event, np.full(ob.size, f), m, count=False)
                bo = ar.draw_h(event, ob, m, count=False)
                res = _pair_outcomes(ar.pool, np.full(ob.size, f), ob, xb, bf, bo, eps * 64.0)[0]
                hit = np.flatnonzero(res == Result.WIN_SECOND)
                if hit.size:
                    lost_at = int(hit[0]) + 1
                    ar.tally(lost_at, m)
                    yield lost_at
                    break
                ar.tally(ob.size, m)
                yield ob.size
            if lost_at is None:
                return int(f)
        remaining = np.setdiff1d(remaining, finalists)
    return None


def _depth(gamma: float) -> int:
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    return max(0, math.ceil(-math.log2(gamma) - 1e-12))


def _recursive_gen(ar: _Arena, idx, eps: float, delta: float, depth: int) -> Iterator[int]:
    idx = np.asarray(idx, dtype=np.int64)
    if depth == 0 or idx.size <= 2:
        return (yield from _slow_gen(ar, idx, eps, delta))
    half = delta / 2.0
    groups = np.array_split(idx, math.ceil(math.sqrt(idx.size)))
    xb = None
    if depth == 1:
        # base-level groups share one draw from the target
        xb = ar.draw_x(slow_samples(max(g.size for g in groups), eps, half))
    winners = []
    for g in groups:
        if depth == 1:
            w = yield from _slow_gen(ar, g, eps, half, xb)
        else:
            w = yield from _recursive_gen(ar, g, eps, half, depth - 1)
        if w is not None:
            winners.append(w)
    if not winners:
        return None
    return (yield from _recursive_gen(ar, winners, 8.0 * eps, half, depth - 1))


def _run(gen) -> Optional[int]:
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def _race(gen_a, gen_b, stats: TournamentStats) -> Optional[int]:
    """Advance two variants alternately, one competition at a time.

    Work is done in batches, so each variant reports how many competitions
    it completed; the variant that is behind advances next. A variant that
    finishes after ``c`` competitions wins against one still running if the
    other had not finished within its own first ``c`` (A moves first on ties).
    """
    gens = {"A": gen_a, "B": gen_b}
    done = {"A": 0, "B": 0}
    finished = {}
    while True:
        live = [k for k in ("A", "B") if k not in finished]
        if not live:
            break
        k = min(live, key=lambda v: (done[v], v))
        try:
            done[k] += next(gens[k])
        except StopIteration as stop:
            finished[k] = (done[k], stop.value)
            if stop.value is not None:
                other = "B" if k == "A" else "A"
                limit = done[k] if k == "A" else done[k] - 1
                if other in finished or done[other] >= limit:
                    break
                # let the other variant catch up to the same logical time
                while other not in finished and done[other] < limit:
                    try:
                        done[other] += next(gens[other])
                    except StopIteration as stop2:
                        finished[other] = (done[other], stop2.value)
                break
    candidates = []
    for k, (cnt, val) in finished.items():
        if val is not None:
            # logical finish time: A's c-th step is 2c-1, B's is 2c
            candidates.append((2 * cnt - (1 if k == "A" else 0), k, val))
    if not candidates:
        stats.variant = None
        return None
    _, k, val = min(candidates)
    stats.variant = k
    return val


def _start(x, hs, seed):
    pool = make_pool(hs)
    if len(pool) == 0:
        raise ValueError("need at least one hypothesis")
    stats = TournamentStats()
    return pool, stats, _Arena(x, pool, seed, stats)


def _finish(pool, stats, index, t0) -> TournamentResult:
    stats.seconds = time.perf_counter() - t0
    return TournamentResult(None if index is None else pool[index], index, stats)


def slow_tournament(x, hs, eps: float, delta: float, seed=None) -> TournamentResult:
    """All-pairs tournament; the winner never lost a competition.

    :param x: target sample source (``draw(n)``).
    :param hs: hypotheses, as a list or a :class:`HypothesisPool`.
    """
    t0 = time.perf_counter()
    pool, stats, ar = _start(x, hs, seed)
    return _finish(pool, stats, _run(_slow_gen(ar, np.arange(len(pool)), eps, delta)), t0)


def fast_tournament(x, hs, eps: float, delta: float, seed=None, final_gamma: Optional[float] = None) -> TournamentResult:
    """Quasi-linear tournament racing two variants at confidence ``delta/2`` each.

    With ``final_gamma`` set, variant A's last tournament is the recursive one.
    """
    t0 = time.perf_counter()
    pool, stats, ar = _start(x, hs, seed)
    idx = np.arange(len(pool))
    if idx.size == 1:
        return _finish(pool, stats, 0, t0)
    gen_a = _variant_a(ar, idx, eps, delta / 2.0, final_gamma)
    gen_b = _variant_b(ar, idx, eps, delta / 2.0)
    return _finish(pool, stats, _race(gen_a, gen_b, stats), t0)


def recursive_slow_tournament(x, hs, eps: float, delta: float, gamma: float, seed=None) -> TournamentResult:
    """Group-then-final tournament nested ``t`` deep, ``2^-t <= gamma``."""
    t0 = time.perf_counter()
    pool, stats, ar = _start(x, hs, seed)
    gen = _recursive_gen(ar, np.arange(len(pool)), eps, delta, _depth(gamma))
    return _finish(pool, stats, _run(gen), t0)


@dataclass(frozen=True)
class TournamentConfig:
    """Which tournament to run and with what parameters.

    ``engine`` is ``"slow"``, ``"fast"`` or ``"recursive"``. ``gamma`` is
    required for ``"recursive"``; for ``"fast"`` it selects the variant whose
    final stage is the recursive tournament.
    """

    eps: float
    delta: float
    engine: str = "fast"
    gamma: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.engine not in ("slow", "fast", "recursive"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine == "recursive" and self.gamma is None:
            raise ValueError("the recursive engine needs gamma")
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if not (0 < self.eps and 0 < self.delta < 1):
            raise ValueError("need eps > 0 and delta in (0, 1)")

    @classmethod
    def parse_engine(cls, text: str, **kw) -> "TournamentConfig":
        """Build from ``slow``, ``fast``, ``fast:GAMMA`` or ``recursive:GAMMA``."""
        name, _, g = text.partition(":")
        return cls(engine=name, gamma=float(g) if g else None, **kw)

    @property
    def label(self) -> str:
        return self.engine if self.gamma is None else f"{self.engine}:{self.gamma:g}"


def select(x, hs, config: TournamentConfig) -> TournamentResult:
    if config.engine == "slow":
        return slow_tournament(x, hs, config.eps, config.delta, config.seed)
    if config.engine == "recursive":
        return recursive_slow_tournament(x, hs, config.eps, config.delta, config.gamma, config.seed)
    return fast_tournament(x, hs, config.eps, config.delta, config.seed, final_gamma=config.gamma)
