"""Occupancy statistics of bootstrap column resampling.

When t column indices are drawn uniformly with replacement from {1..t},
the number of distinct indices u follows the classical occupancy
distribution (t balls into t boxes).  This module provides the exact
distribution, its closed-form moments, their large-t approximations,
and the zero-eigenvalue count a correlation replicate inherits from u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

# pmf length is t; cap bounds memory for the dense support.
MAX_FEATURES = 100_000

__all__ = [
    "MAX_FEATURES",
    "OccupancyDistribution",
    "ZeroEigenModel",
    "occupancy_pmf",
    "exact_moments",
    "approx_moments",
    "zero_count",
    "zero_eigen_model",
    "occupancy_cdf_vs_normal",
]


@dataclass(frozen=True)
class OccupancyDistribution:
    """Distribution of the distinct-value count among t uniform draws from {1..t}.

    Attributes
    ----------
    t : int
        Number of items drawn (equal to the number of available values).
    pmf : np.ndarray
        Probabilities for u = 1..t; ``pmf[u - 1]`` is P(u distinct values).
        Entries whose true probability underflows binary64 are stored as 0.0.
    mean, variance : float
        First two moments of the stored pmf.
    """

    t: int
    pmf: np.ndarray
    mean: float
    variance: float

    def cdf(self) -> np.ndarray:
        """Cumulative probabilities over u = 1..t."""
        return np.cumsum(self.pmf)


@dataclass(frozen=True)
class ZeroEigenModel:
    """Normal model of the zero-eigenvalue count of one bootstrap replicate.

    For n objects and t features the replicate loses one eigenvalue per
    missing distinct column, so the zero count is n + 1 - u.  The model
    keeps the normal approximation unclamped; it is meant for the
    zero-rich regime where n is well above t, where clamping at zero
    never binds.
    """

    n: int
    t: int
    mean_z: float
    sd_z: float


def occupancy_pmf(t: int) -> OccupancyDistribution:
    """Exact distribution of the number of distinct values in t draws.

    Uses the occupancy recurrence over successive draws,
    ``P(j+1, u) = P(j, u) * u/t + P(j, u-1) * (t-u+1)/t``,
    which is numerically stable for large t, unlike the direct
    Stirling-number form that overflows binary64 near t = 170.

    Parameters
    ----------
    t : int
        Number of draws and of available values, ``1 <= t <= MAX_FEATURES``.
    """
    t = _positive_int(t, "t")
    if t > MAX_FEATURES:
        raise ValueError(f"t={t} exceeds the supported maximum {MAX_FEATURES}")
    u = np.arange(t + 1, dtype=float)
    stay = u / t          # next draw repeats one of the u values already seen
    grow = (t - u) / t    # next draw is a new value
    p = np.zeros(t + 1)
    p[1] = 1.0
    for _ in range(t - 1):
        nxt = p * stay
        nxt[1:] += p[:-1] * grow[:-1]
        p = nxt
    pmf = p[1:]
    mean = float(np.dot(np.arange(1, t + 1), pmf))
    variance = float(np.dot(np.arange(1, t + 1) ** 2, pmf) - mean * mean)
    return OccupancyDistribution(t=t, pmf=pmf, mean=mean, variance=max(variance, 0.0))


def exact_moments(t: int) -> tuple[float, float]:
    """Closed-form mean and variance of the distinct-value count.

    mean     = t * [1 - (1 - 1/t)^t]
    variance = t (1 - 1/t)^t + t^2 (1 - 1/t)(1 - 2/t)^t - t^2 (1 - 1/t)^(2t)
    """
    t = _positive_int(t, "t")
    if t == 1:
        return 1.0, 0.0
    one = math.exp(t * math.log1p(-1.0 / t))                     # (1 - 1/t)^t
    two = 0.0 if t == 2 else math.exp(t * math.log1p(-2.0 / t))  # (1 - 2/t)^t
    mean = t * (1.0 - one)
    variance = t * one + t * t * (1.0 - 1.0 / t) * two - t * t * one * one
    return mean, variance


def approx_moments(t: int) -> tuple[float, float]:
    """Large-t approximations of the distinct-value moments.

    mean     ~ (1 - 1/e) t + 1/(2e)
    variance ~ (e - 2)/e^2 t + (3 - e)/(2 e^2)

    Already accurate to about 0.01 in the mean from t = 10 on; poor for
    very small t (the exact mean at t = 1 is 1, the approximation 0.816).
    """
    t = _positive_int(t, "t")
    e = math.e
    mean = (1.0 - 1.0 / e) * t + 1.0 / (2.0 * e)
    variance = (e - 2.0) / (e * e) * t + (3.0 - e) / (2.0 * e * e)
    return mean, variance


def zero_count(n: int, u: int) -> int:
    """Zero eigenvalues of a replicate built from u distinct columns: max(n + 1 - u, 0)."""
    n = _positive_int(n, "n")
    u = _positive_int(u, "u")
    return max(n + 1 - u, 0)


def zero_eigen_model(n: int, t: int) -> ZeroEigenModel:
    """Normal model N(n + 1 - mean(t), sd(t)) for a replicate's zero count."""
    n = _positive_int(n, "n")
    t = _positive_int(t, "t")
    if t < 2:
        raise ValueError("t must be at least 2 (the distinct-value count is degenerate at t=1)")
    mean, variance = exact_moments(t)
    return ZeroEigenModel(n=n, t=t, mean_z=n + 1 - mean, sd_z=math.sqrt(variance))


def occupancy_cdf_vs_normal(t: int, samples) -> float:
    """Kolmogorov-Smirnov distance between observed distinct counts and the normal model.

    The empirical CDF is compared with N(mean(t), sd(t)) at each distinct
    sample value, taking the midpoint of the empirical jump there.  The
    midpoint convention makes the distance insensitive to the half-step
    lattice offset of integer-valued counts, which is what the normal
    model is meant to approximate.

    Parameters
    ----------
    t : int
        Number of features used to generate the samples; must be >= 2.
    samples : array-like
        Observed distinct-value counts, each in [1, t].
    """
    t = _positive_int(t, "t")
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("samples must be a nonempty one-dimensional sequence")
    if np.any(x < 1) or np.any(x > t):
        raise ValueError("every sample must lie in [1, t]")
    mean, variance = exact_moments(t)
    if variance <= 0.0:
        raise ValueError("t must be at least 2 (zero variance at t=1)")
    sd = math.sqrt(variance)
    values, counts = np.unique(x, return_counts=True)
    upper = np.cumsum(counts) / x.size
    lower = upper - counts / x.size
    midpoint = 0.5 * (lower + upper)
    reference = ndtr((values - mean) / sd)
    return float(np.max(np.abs(reference - midpoint)))


def _positive_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value}")
    return int(value)
