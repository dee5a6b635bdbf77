"""Closed-form predictions for bootstrap-averaged correlation matrices.

For n objects and t features, each bootstrap replicate loses rank
according to how many distinct columns it drew, and the average of k
replicates is positive-definite exactly when the replicates' null spaces
fail to share a common direction.  With the occupancy moments mean(t)
and sd(t), the probability of that event is approximately

    P(pd) ~ 1/2 [1 + erf( ([mean(t) - 1] k - n) / (sd(t) sqrt(2k)) )]

This module evaluates that curve and the replicate budgets derived from
it: the count needed for a chosen confidence, the midpoint of the
transition, and the large-system limit e/(e-1) * n/t of both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import erfinv

from .occupancy import approx_moments, exact_moments

__all__ = [
    "PdPrediction",
    "BootstrapBudget",
    "prob_pd",
    "predict_pd",
    "k_plus",
    "k_star",
    "k_limit",
    "a_from_alpha",
    "alpha_from_a",
    "bootstrap_budget",
    "recommended_k",
]


@dataclass(frozen=True)
class PdPrediction:
    """Predicted probability that a k-replicate average is positive-definite."""

    n: int
    t: int
    k: int
    probability: float


@dataclass(frozen=True)
class BootstrapBudget:
    """Replicate budgets for making the averaged correlation positive-definite.

    ``k_plus`` reaches confidence 1 - alpha with alpha = 1 - erf(a);
    ``k_star`` is the transition midpoint where the probability crosses
    one half; ``k_limit`` is their shared large-system limit at fixed
    aspect ratio n/t; ``k_upper`` = n replicates always suffice.  For any
    practically relevant confidence (a above roughly 0.02, i.e. any
    alpha below ~0.98) the budgets satisfy k_plus >= k_star.
    """

    n: int
    t: int
    a: float
    alpha: float
    k_plus: float
    k_star: float
    k_limit: float
    k_upper: int

    @property
    def recommended(self) -> int:
        """ceil(k_plus) capped at the hard upper bound n."""
        return min(math.ceil(self.k_plus), self.k_upper)


def prob_pd(n: int, t: int, k, approximate: bool = False) -> float:
    """Probability that the average of k bootstrap replicates is positive-definite.

    Evaluated with the exact occupancy moments by default; set
    ``approximate`` to use the large-t moment approximations instead.
    ``k`` may be any positive real for plotting smooth curves; the model
    itself concerns integer replicate counts.  The result is clamped to
    [0, 1] and is nondecreasing in k.
    """
    mean, sd = _moments(t, approximate)
    n = _validate_n(n)
    k = float(k)
    if k <= 0:
        raise ValueError("k must be positive")
    argument = ((mean - 1.0) * k - n) / (sd * math.sqrt(2.0 * k))
    return min(1.0, max(0.0, 0.5 * (1.0 + math.erf(argument))))


def predict_pd(n: int, t: int, k: int, approximate: bool = False) -> PdPrediction:
    """`prob_pd` packaged with its inputs."""
    return PdPrediction(n=n, t=t, k=int(k), probability=prob_pd(n, t, k, approximate))


def k_plus(n: int, t: int, a: float, approximate: bool = False) -> float:
    """Replicate count achieving confidence 1 - alpha, alpha = 1 - erf(a).

    Closed-form solution (in real k) of setting the erf argument of the
    probability curve equal to ``a``:

        k+ = (a^2 v + (m - 1) n + sqrt(a^4 v^2 + 2 a^2 v (m - 1) n)) / (m - 1)^2

    with m, v the occupancy mean and variance.  As a -> 0 it collapses to
    the transition midpoint n / (m - 1).
    """
    mean, sd = _moments(t, approximate)
    n = _validate_n(n)
    a = float(a)
    if a <= 0:
        raise ValueError("a must be positive")
    m1 = mean - 1.0
    if m1 <= 0:
        raise ValueError("the occupancy mean must exceed 1 (t >= 2)")
    v = sd * sd
    return (a * a * v + m1 * n + math.sqrt(a**4 * v * v + 2.0 * a * a * v * m1 * n)) / (m1 * m1)


def k_star(n: int, q: float) -> float:
    """Transition midpoint of the probability curve at aspect ratio q = n/t.

    Derived by substituting the large-t moment approximations and solving
    for the erf argument crossing zero:

        k* = 2 e n q / (2 (e - 1) n + (1 - 2 e) q)
    """
    n = _validate_n(n)
    q = float(q)
    if q <= 0:
        raise ValueError("q must be positive")
    e = math.e
    denominator = 2.0 * (e - 1.0) * n + (1.0 - 2.0 * e) * q
    if denominator <= 0:
        raise ValueError(f"undefined at n={n}, q={q}: denominator {denominator:.3g} is not positive")
    return 2.0 * e * n * q / denominator


def k_limit(q: float) -> float:
    """Large-system limit of the required replicate count: e/(e-1) q ~ 1.582 q."""
    q = float(q)
    if q <= 0:
        raise ValueError("q must be positive")
    return math.e / (math.e - 1.0) * q


def a_from_alpha(alpha: float) -> float:
    """Confidence argument a with 1 - erf(a) = alpha (a ~ 1.82 at alpha = 0.01)."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return float(erfinv(1.0 - alpha))


def alpha_from_a(a: float) -> float:
    """Failure probability alpha = 1 - erf(a)."""
    a = float(a)
    if a <= 0:
        raise ValueError("a must be positive")
    return 1.0 - math.erf(a)


def bootstrap_budget(n: int, t: int, alpha: float = 0.01, a: float | None = None) -> BootstrapBudget:
    """Assemble every replicate budget for (n, t) at the requested confidence."""
    n = _validate_n(n)
    _moments(t, False)  # validates t >= 2
    if a is None:
        a = a_from_alpha(alpha)
    else:
        alpha = alpha_from_a(a)
    q = n / t
    return BootstrapBudget(
        n=n,
        t=t,
        a=a,
        alpha=alpha,
        k_plus=k_plus(n, t, a),
        k_star=k_star(n, q),
        k_limit=k_limit(q),
        k_upper=n,
    )


def recommended_k(n: int, t: int, alpha: float = 0.01) -> int:
    """ceil(k_plus) at confidence 1 - alpha, capped at the sufficient bound n."""
    return bootstrap_budget(n, t, alpha=alpha).recommended


def _moments(t: int, approximate: bool) -> tuple[float, float]:
    if t < 2:
        raise ValueError("t must be at least 2 (the occupancy spread vanishes at t=1)")
    mean, variance = approx_moments(t) if approximate else exact_moments(t)
    return mean, math.sqrt(variance)


def _validate_n(n: int) -> int:
    if n < 1:
        raise ValueError("n must be a positive integer")
    return int(n)
