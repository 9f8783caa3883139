"""Univariate Gaussians, finite Gaussian mixtures and distances between them.

The error function is computed here rather than borrowed: a Kummer-form
Maclaurin series covers ``|x| <= 3`` and a Laplace continued fraction for
``erfc`` covers the tails. Both are vectorized over numpy arrays.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

SQRT2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)
TWO_OVER_SQRT_PI = 2.0 / SQRT_PI
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Series band edges (upper |x| of each band) and the term count that takes the
# Kummer series below 1e-17 relative error at that edge.
_SERIES_BANDS = (0.75, 1.5, 2.25, 3.0)
_SERIES_SPLIT = 3.0
# erfc underflows relative to 1 beyond this; erf is exactly +-1 in doubles.
_SATURATE = 6.0
# Continued-fraction depth; converged to machine precision for x >= 3.
_CF_DEPTH = 40


def _series_terms(edge: float) -> int:
    term, total, n = 1.0, 1.0, 0
    while term > 1e-17 * total:
        n += 1
        term *= 2.0 * edge * edge / (2 * n + 1)
        total += term
    return n + 1


_BAND_TERMS = tuple(_series_terms(b) for b in _SERIES_BANDS)


class DomainError(ValueError):
    """Argument outside the domain of a numeric function."""


def _erf_series(x: np.ndarray, nterms: int) -> np.ndarray:
    # erf(x) = 2x/sqrt(pi) exp(-x^2) sum_n (2x^2)^n / (2n+1)!!  (all terms positive)
    t = 2.0 * x * x
    s = np.ones_like(x)
    for n in range(nterms, 0, -1):
        s = 1.0 + s * t / (2 * n + 1)
    return TWO_OVER_SQRT_PI * x * np.exp(-x * x) * s


def _erfc_cf(x: np.ndarray) -> np.ndarray:
    # Laplace continued fraction, valid for x > 0, evaluated bottom-up.
    f = x.copy()
    for k in range(_CF_DEPTH, 0, -1):
        f = x + (0.5 * k) / f
    return np.exp(-x * x) / (SQRT_PI * f)


def _erf_array(x: np.ndarray) -> np.ndarray:
    ax = np.abs(x)
    out = np.empty_like(ax)
    lo = 0.0
    for edge, nterms in zip(_SERIES_BANDS, _BAND_TERMS):
        mask = (ax >= lo) & (ax <= edge) if lo == 0.0 else (ax > lo) & (ax <= edge)
        if mask.any():
            out[mask] = _erf_series(ax[mask], nterms)
        lo = edge
    mid = (ax > _SERIES_SPLIT) & (ax < _SATURATE)
    if mid.any():
        out[mid] = 1.0 - _erfc_cf(ax[mid])
    out[ax >= _SATURATE] = 1.0
    nan = np.isnan(ax)
    if nan.any():
        out[nan] = np.nan
    return np.copysign(out, x)


def _erfc_positive(ax: np.ndarray) -> np.ndarray:
    out = np.empty_like(ax)
    tail = ax > _SERIES_SPLIT
    if tail.any():
        out[tail] = _erfc_cf(ax[tail])
    body = ~tail
    if body.any():
        out[body] = 1.0 - _erf_array(ax[body])
    return out


def _wrap(fn, x):
    arr = np.asarray(x, dtype=float)
    res = fn(np.atleast_1d(arr))
    if arr.ndim == 0:
        return float(res[0])
    return res.reshape(arr.shape)


def erf(x):
    """Error function, absolute error below 1e-15 on finite inputs.

    :param x: scalar or array.
    :return: value(s) in [-1, 1], same shape as ``x``.
    """
    return _wrap(_erf_array, x)


def erfc(x):
    """Complementary error function ``1 - erf(x)``.

    Relative accuracy is kept in the upper tail (x > 3), where ``1 - erf``
    would cancel.
    """

    def _impl(a):
        out = np.empty_like(a)
        pos = a >= 0
        out[pos] = _erfc_positive(a[pos])
        neg = ~pos
        out[neg] = 2.0 - _erfc_positive(-a[neg])
        return out

    return _wrap(_impl, x)


def erf_inv(y):
    """Inverse error function on (-1, 1).

    Starts from Winitzki's closed-form approximation and polishes with
    Newton steps that stay inside a shrinking bracket.

    :raises DomainError: if any ``|y| >= 1``.
    """
    arr = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(np.abs(arr) >= 1.0):
        raise DomainError("erf_inv is defined on the open interval (-1, 1)")

    def _impl(yv):
        a = 0.147
        ln = np.log1p(-yv * yv)
        b = 2.0 / (math.pi * a) + 0.5 * ln
        x = np.copysign(np.sqrt(np.sqrt(b * b - ln / a) - b), yv)
        ay = np.abs(yv)
        lo = np.zeros_like(ay)
        hi = np.full_like(ay, _SATURATE)
        ax = np.abs(x)
        # Residual taken through erfc for |y| > 1/2 so that y near 1 keeps precision.
        upper = ay > 0.5
        for _ in range(60):
            r = np.where(upper, _erfc_positive(ax) - (1.0 - ay), 0.0)
            if (~upper).any():
                r[~upper] = ay[~upper] - _erf_array(ax[~upper])
            # r > 0 means erf(ax) < ay, root lies above ax
            lo = np.where(r > 0, np.maximum(lo, ax), lo)
            hi = np.where(r < 0, np.minimum(hi, ax), hi)
            step = r / (TWO_OVER_SQRT_PI * np.exp(-ax * ax))
            nxt = ax + step
            outside = (nxt <= lo) | (nxt >= hi)
            nxt = np.where(outside, 0.5 * (lo + hi), nxt)
            done = np.abs(nxt - ax) <= 1e-16 * np.maximum(1.0, ax)
            ax = nxt
            if done.all():
                break
        # the bracket starts at 0, so an exact zero is never reached by iteration
        return np.copysign(np.where(ay == 0.0, 0.0, ax), yv)

    return _wrap(_impl, arr)


def normal_cdf(z):
    """Standard normal CDF, accurate in both tails."""
    return _wrap(lambda a: 0.5 * _erfc_signed(-a / SQRT2), z)


def _erfc_signed(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = _erfc_positive(a[pos])
    out[~pos] = 2.0 - _erfc_positive(-a[~pos])
    return out


@dataclass(frozen=True)
class Gaussian:
    """Univariate normal distribution N(mu, sigma^2)."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma}")

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z - LOG_SQRT_2PI) / self.sigma

    def cdf(self, x):
        return normal_cdf((np.asarray(x, dtype=float) - self.mu) / self.sigma)


@dataclass(frozen=True)
class Mixture:
    """Finite mixture of univariate Gaussians.

    Components keep their construction order; nothing is canonicalized.
    """

    weights: Tuple[float, ...]
    components: Tuple[Gaussian, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.weights) == 0 or len(self.weights) != len(self.components):
            raise ValueError("need one weight per component and at least one component")
        if any(not (w >= 0.0) for w in self.weights):
            raise ValueError(f"weights must be nonnegative, got {self.weights}")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {self.weights}")

    @classmethod
    def two(cls, w: float, mu1: float, sigma1: float, mu2: float, sigma2: float) -> "Mixture":
        return cls((w, 1.0 - w), (Gaussian(mu1, sigma1), Gaussian(mu2, sigma2)))

    @classmethod
    def single(cls, mu: float, sigma: float) -> "Mixture":
        return cls((1.0,), (Gaussian(mu, sigma),))

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def mus(self) -> np.ndarray:
        return np.array([g.mu for g in self.components])

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([g.sigma for g in self.components])

    def pdf(self, x):
        return mixture_pdf(self, x)

    def logpdf(self, x):
        return mixture_logpdf(self, x)

    def cdf(self, x):
        return mixture_cdf(self, x)

    def inv_cdf(self, p):
        return mixture_inv_cdf(self, p)

    def sample(self, rng: np.random.Generator, size=None):
        return sample_mixture(self, rng, size)

    def window(self, width: float = 12.0) -> Tuple[float, float]:
        """Interval covering every mean +- ``width`` times the largest sigma."""
        smax = float(self.sigmas.max())
        return float(self.mus.min()) - width * smax, float(self.mus.max()) + width * smax


def mixture_pdf(m: Mixture, x):
    """Density of ``m`` at ``x`` (scalar or array)."""
    xs = np.asarray(x, dtype=float)
    out = np.zeros(xs.shape)
    for w, g in zip(m.weights, m.components):
        if w > 0.0:
            out = out + w * g.pdf(xs)
    return float(out) if xs.ndim == 0 else out


def mixture_logpdf(m: Mixture, x):
    """Log-density; stays finite far in the tails where the density underflows."""
    xs = np.asarray(x, dtype=float)
    terms = []
    for w, g in zip(m.weights, m.components):
        if w > 0.0:
            z = (xs - g.mu) / g.sigma
            terms.append(math.log(w) - math.log(g.sigma) - LOG_SQRT_2PI - 0.5 * z * z)
    out = terms[0]
    for t in terms[1:]:
        out = np.logaddexp(out, t)
    return float(out) if xs.ndim == 0 else out


def mixture_cdf(m: Mixture, x):
    """CDF of ``m``; accepts +-inf."""
    xs = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xs).astype(float)
    out = np.zeros(flat.shape)
    finite = np.isfinite(flat)
    for w, g in zip(m.weights, m.components):
        if w > 0.0:
            out[finite] += w * normal_cdf((flat[finite] - g.mu) / g.sigma)
    out[flat == np.inf] = 1.0
    out[flat == -np.inf] = 0.0
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if xs.ndim == 0 else out.reshape(xs.shape)


def mixture_inv_cdf(m: Mixture, p):
    """Quantile function of ``m`` for ``p`` in (0, 1).

    Vectorized bisection on the 12-sigma window (widened if ``p`` is extreme)
    down to width 1e-12, followed by two Newton steps.

    :raises DomainError: if any ``p`` is outside (0, 1).
    """
    ps = np.asarray(p, dtype=float)
    if np.any(~(ps > 0.0)) or np.any(~(ps < 1.0)):
        raise DomainError("mixture_inv_cdf needs p in (0, 1)")
    flat = np.atleast_1d(ps).astype(float)
    lo_w, hi_w = m.window()
    lo = np.full(flat.shape, lo_w)
    hi = np.full(flat.shape, hi_w)
    smax = float(m.sigmas.max())
    while np.any(mixture_cdf(m, lo) > flat):
        lo = np.where(mixture_cdf(m, lo) > flat, lo - 12.0 * smax, lo)
    while np.any(mixture_cdf(m, hi) < flat):
        hi = np.where(mixture_cdf(m, hi) < flat, hi + 12.0 * smax, hi)
    while np.max(hi - lo) > 1e-12 * max(1.0, float(np.max(np.abs(hi)))):
        mid = 0.5 * (lo + hi)
        if not np.any((mid > lo) & (mid < hi)):
            break
        below = mixture_cdf(m, mid) < flat
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(2):
        dens = mixture_pdf(m, x)
        ok = dens > 0
        step = np.where(ok, (mixture_cdf(m, x) - flat) / np.where(ok, dens, 1.0), 0.0)
        cand = x - step
        x = np.where(np.abs(step) < (hi - lo) + 1e-9, cand, x)
    return float(x[0]) if ps.ndim == 0 else x.reshape(ps.shape)


def sample_mixture(m: Mixture, rng: np.random.Generator, size=None):
    """Draw from ``m``: one uniform picks the component, then Box-Muller.

    Each draw consumes three uniforms from ``rng`` so the sequence is a
    deterministic function of the generator state.
    """
    n = 1 if size is None else int(np.prod(size))
    u = rng.random((3, n))
    cum = np.cumsum(m.weights)
    cum[-1] = 1.0
    idx = np.searchsorted(cum, u[0], side="right")
    idx = np.minimum(idx, m.k - 1)
    # 1 - u lies in (0, 1], keeping the log finite
    z = np.sqrt(-2.0 * np.log1p(-u[1])) * np.cos(2.0 * math.pi * u[2])
    out = m.mus[idx] + m.sigmas[idx] * z
    if size is None:
        return float(out[0])
    return out.reshape(size)


def tv_bound_gaussians(a: Gaussian, b: Gaussian) -> float:
    """Closed-form upper bound on d_TV between two Gaussians.

    With ``s1 <= s2`` the bound is ``(|mu1 - mu2|/s1 + (s2^2 - s1^2)/s1^2) / 2``.
    """
    if a.sigma > b.sigma:
        a, b = b, a
    s1, s2 = a.sigma, b.sigma
    return 0.5 * (abs(a.mu - b.mu) / s1 + (s2 * s2 - s1 * s1) / (s1 * s1))


def tv_bound_mixtures(x: Mixture, y: Mixture) -> float:
    """Upper bound on d_TV between two-component mixtures, matched by index."""
    if x.k != 2 or y.k != 2:
        raise ValueError("tv_bound_mixtures needs two-component mixtures")
    w, w_hat = x.weights[0], y.weights[0]
    return (
        abs(w - w_hat)
        + w * tv_bound_gaussians(x.components[0], y.components[0])
        + (1.0 - w) * tv_bound_gaussians(x.components[1], y.components[1])
    )


class Metric(Enum):
    TOTAL_VARIATION = "tv"
    KOLMOGOROV = "kolmogorov"


@dataclass(frozen=True)
class DistanceValue:
    value: float
    metric: Metric
    abs_tolerance: float


# Reported tolerance of the crossing-based distance oracles. Covers the erf
# error summed over segments and the bisection width of each crossing.
DISTANCE_TOLERANCE = 1e-9
_GRID_PER_COMPONENT = 4001


def density_crossings(x: Mixture, y: Mixture) -> np.ndarray:
    """Points where the two densities cross, sorted.

    Sign changes of ``log f_x - log f_y`` are located on a grid made of
    ``mean +- 12 sigma`` stretches around every component of both mixtures,
    then refined by bisection to machine precision.
    """
    grids = [np.array(x.window() + y.window())]
    for m in (x, y):
        for g in m.components:
            grids.append(g.mu + g.sigma * np.linspace(-12.0, 12.0, _GRID_PER_COMPONENT))
    grid = np.unique(np.concatenate(grids))
    d = mixture_logpdf(x, grid) - mixture_logpdf(y, grid)
    s = np.sign(d)
    nz = s != 0
    exact = grid[~nz]
    gs, ss = grid[nz], s[nz]
    flip = np.nonzero(ss[:-1] != ss[1:])[0]
    lo, hi = gs[flip].copy(), gs[flip + 1].copy()
    s_lo = ss[flip]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not np.any((mid > lo) & (mid < hi)):
            break
        sm = np.sign(mixture_logpdf(x, mid) - mixture_logpdf(y, mid))
        same = sm == s_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return np.sort(np.concatenate([exact, 0.5 * (lo + hi)]))


def _cdf_gap(x: Mixture, y: Mixture, pts: np.ndarray) -> np.ndarray:
    return mixture_cdf(x, pts) - mixture_cdf(y, pts)


def tv_numeric(x: Mixture, y: Mixture) -> DistanceValue:
    """Total variation distance between two mixtures.

    Between consecutive density crossings ``f_x - f_y`` keeps one sign, so
    ``1/2 * int |f_x - f_y|`` is half the sum of absolute CDF-gap increments.
    """
    c = density_crossings(x, y)
    gap = np.concatenate([[0.0], _cdf_gap(x, y, c), [0.0]])
    value = 0.5 * float(np.sum(np.abs(np.diff(gap))))
    return DistanceValue(min(max(value, 0.0), 1.0), Metric.TOTAL_VARIATION, DISTANCE_TOLERANCE)


def kolmogorov_numeric(x: Mixture, y: Mixture) -> DistanceValue:
    """Kolmogorov distance; ``|F_x - F_y|`` peaks where the densities cross."""
    c = density_crossings(x, y)
    value = float(np.max(np.abs(_cdf_gap(x, y, c)))) if c.size else 0.0
    return DistanceValue(min(value, 1.0), Metric.KOLMOGOROV, DISTANCE_TOLERANCE)


def as_mixture(weights: Sequence[float], mus: Sequence[float], sigmas: Sequence[float]) -> Mixture:
    return Mixture(tuple(weights), tuple(Gaussian(m, s) for m, s in zip(mus, sigmas)))
