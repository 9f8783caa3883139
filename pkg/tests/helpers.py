"""Shared test fixtures and reference implementations."""

import math

import numpy as np
from scipy import special

from gmmlearn.distributions import Mixture, as_mixture
from gmmlearn.interval_partition import StepFunction, from_masses, monotonize

# verdict lines of the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def record_verdict(name: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def random_mixture(rng: np.random.Generator) -> Mixture:
    """Two-component mixture with moderate parameters."""
    return Mixture.two(
        float(rng.uniform(0.05, 0.95)),
        float(rng.normal(0, 3)), float(rng.uniform(0.2, 3)),
        float(rng.normal(0, 3)), float(rng.uniform(0.2, 3)),
    )


def swap_components(m: Mixture) -> Mixture:
    (_, b), (g, h) = m.weights, m.components
    return Mixture.two(b, h.mu, h.sigma, g.mu, g.sigma)


def ecdf_kolmogorov(samples, cdf) -> float:
    """sup |F_n - F| for raw samples, from the sorted order statistics."""
    xs = np.sort(np.asarray(samples, float))
    n = xs.size
    f = cdf(xs)
    return float(max(np.max(np.arange(1, n + 1) / n - f), np.max(f - np.arange(n) / n)))


def step_sup_gap(bp, f_levels, g_levels) -> float:
    """sup |f - g| for two step functions on the same breakpoints."""
    return float(np.max(np.abs(np.asarray(f_levels) - np.asarray(g_levels))))


# Discrete triples (target, first, second) with exact distances for the
# four pairwise-competition properties. Each builder returns the expected
# outcome check as a predicate on the result.
def competition_triple(kind: str, eps: float, rng: np.random.Generator):
    """Target pmf ``p`` and hypotheses ``(q1, q2)`` placed for property ``kind``.

    ``close_far``: first within eps, second beyond 8 eps (first must win).
    ``close_mid``: first within eps, second in (4 eps, 8 eps] (second must not win).
    ``far_close`` / ``mid_close``: the same with the roles swapped.
    ``near_pair``: the two hypotheses within 5 eps of each other (must draw).
    """
    from gmmlearn.planted import discrete_tv, perturb, spike

    p = rng.dirichlet(np.full(20, 20.0))
    near = perturb(p, rng.uniform(0.2, 1.0) * eps, rng)
    if kind in ("close_far", "far_close"):
        other = spike(p, int(rng.integers(20)), rng.uniform(0.55, 1.0))
        assert discrete_tv(p, other) > 8 * eps
    elif kind in ("close_mid", "mid_close"):
        other = perturb(p, rng.uniform(4.05, 8.0) * eps, rng)
    elif kind == "near_pair":
        first = perturb(p, rng.uniform(0, 3) * eps, rng)
        second = perturb(first, rng.uniform(0, 5) * eps, rng)
        assert discrete_tv(first, second) <= 5 * eps + 1e-12
        return p, first, second
    else:
        raise ValueError(kind)
    return (p, near, other) if kind.startswith("close") else (p, other, near)


def property_failed(kind: str, result) -> bool:
    from gmmlearn.selection import Result

    if kind == "close_far":
        return result != Result.WIN_FIRST
    if kind == "far_close":
        return result != Result.WIN_SECOND
    if kind == "close_mid":
        return result == Result.WIN_SECOND
    if kind == "mid_close":
        return result == Result.WIN_FIRST
    return result != Result.DRAW


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def running_max_bruteforce(levels):
    return [max(levels[: i + 1]) for i in range(len(levels))]


def perturbed_normal(mu, sigma, eps, rng, kind, grid=20001):
    """Partition whose CDF is within Kolmogorov distance eps of N(mu, sigma^2).

    The target CDF is shifted by an adversarial profile bounded by ``eps``
    (less the largest rise of the normal CDF between grid points), monotonized, clipped to [0, 1]
    and discretized on a fine grid.
    """
    xs = mu + sigma * np.linspace(-9, 9, grid)
    phi = special.ndtr((xs - mu) / sigma)
    # the step CDF is flat between grid points while the normal CDF rises
    margin = float(np.max(np.diff(phi))) * 1.01
    a = eps - margin
    if kind == "up":
        shift = np.full_like(xs, a)
    elif kind == "down":
        shift = np.full_like(xs, -a)
    elif kind == "spread":
        shift = np.where(xs < mu, a, -a)
    elif kind == "squeeze":
        shift = np.where(xs < mu, -a, a)
    else:
        shift = a * np.clip(np.cumsum(rng.normal(size=xs.size)) / math.sqrt(xs.size) * 3, -1, 1)
    g = monotonize(StepFunction(xs[1:], np.clip(phi + shift, 0, 1))).levels
    g = np.clip(g, 0, 1)
    g[-1] = 1.0
    masses = np.diff(np.concatenate([[0.0], g]))
    keep = masses > 0
    p = from_masses(xs[keep], masses[keep])
    return p


def random_mixture_k(rng, k):
    w = rng.dirichlet(np.ones(k) * 2)
    w = np.maximum(w, 0.05)
    w = w / w.sum()
    return as_mixture(w, rng.normal(0, 4, k), rng.uniform(0.3, 3, k))


def tightest(m: Mixture) -> int:
    """Component with the smallest sigma / weight."""
    return int(np.argmin(m.sigmas / m.weights))


def perturbed_draws(m: Mixture, delta, rng, n):
    """Draws whose CDF is within Kolmogorov distance ``delta`` of ``m``.

    Uniforms pass through a monotone map moving each level by at most
    ``delta`` before the mixture quantile function.
    """
    u = rng.random(n)
    phase = rng.uniform(0, 2 * math.pi)
    v = np.clip(u + delta * np.sin(6 * math.pi * u + phase), 1e-15, 1 - 1e-15)
    return m.inv_cdf(v)


def closept_frequency(n: int, trials: int, rng: np.random.Generator, constants=None) -> float:
    """Fraction of N(0, 1) samples of size ``n`` whose sample nearest 0 has CDF gap in [c1/n, c2/n]."""
    from gmmlearn.nearest_sample import DEFAULT_CONSTANTS

    c = constants or DEFAULT_CONSTANTS
    hits = 0
    for _ in range(trials):
        xs = rng.standard_normal(n)
        gap = abs(special.ndtr(xs[np.argmin(np.abs(xs))]) - 0.5)
        hits += c.c1 / n <= gap <= c.c2 / n
    return hits / trials


def mixture_band_frequency(k: int, trials: int, rng: np.random.Generator, constants=None) -> float:
    """Fraction of random k-mixtures whose nearest-sample distance to the tightest mean is in its band."""
    from gmmlearn.nearest_sample import DEFAULT_CONSTANTS, nearest_distance

    c = constants or DEFAULT_CONSTANTS
    hits = 0
    for _ in range(trials):
        m = random_mixture_k(rng, k)
        j = tightest(m)
        w, mu, s = m.weights[j], m.mus[j], m.sigmas[j]
        n = math.ceil(3 * math.sqrt(math.pi) * c.c2 / (2 * w)) + int(rng.integers(1, 200))
        y = nearest_distance(mu, m.sample(rng, n))
        lo = math.sqrt(2 * math.pi) * c.c1 * s / (k * w * n)
        hi = 3 * math.sqrt(2 * math.pi) * c.c2 * s / (2 * w * n)
        hits += lo <= y <= hi
    return hits / trials


def robust_band_frequency(k: int, trials: int, rng: np.random.Generator, constants=None):
    """Band and sigma-containment frequencies with estimated weight and mean and perturbed draws.

    The weight estimate is within a factor 2, the mean within ``c3 sigma / (2k)``,
    the sample count is ``scale_sample_count(w_hat)`` and the draws are
    ``c1 / (2n)``-close in Kolmogorov distance.
    """
    from gmmlearn.nearest_sample import DEFAULT_CONSTANTS, nearest_distance, scale_sample_count, sigma_candidate_interval

    c = constants or DEFAULT_CONSTANTS
    hits = contained = 0
    for _ in range(trials):
        m = random_mixture_k(rng, k)
        j = tightest(m)
        w, mu, s = m.weights[j], m.mus[j], m.sigmas[j]
        w_hat = min(1.0, w * 2 ** rng.uniform(-1, 1))
        mu_hat = mu + rng.uniform(-1, 1) * c.c3 * s / (2 * k)
        n = scale_sample_count(w_hat, c)
        y = nearest_distance(mu_hat, perturbed_draws(m, c.c1 / (2 * n), rng, n))
        hits += c.c3 * s / (2 * k) <= y <= (math.sqrt(2) + c.c3 / (2 * k)) * s
        lo, hi = sigma_candidate_interval(y, k, c)
        contained += lo <= s <= hi
    return hits / trials, contained / trials
