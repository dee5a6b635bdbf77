"""Figure rendering for occupancy distributions and sweep reports.

Figures are written straight to files (Agg backend), so the functions
work in headless pipelines alongside the CSV reports.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from scipy.special import ndtr

from .occupancy import OccupancyDistribution, exact_moments

__all__ = ["plot_occupancy", "plot_pd_sweep"]


def plot_occupancy(dist: OccupancyDistribution, path, unique_counts=None, dpi: int = 150) -> str:
    """Exact distinct-count distribution against its normal model.

    Left panel: exact pmf with the matching normal density.  When
    sampled counts are given, a right panel overlays their empirical CDF
    on the normal CDF.
    """
    mean, variance = exact_moments(dist.t)
    sd = math.sqrt(variance)
    u = np.arange(1, dist.t + 1)
    panels = 2 if unique_counts is not None else 1
    fig, axes = plt.subplots(1, panels, figsize=(4.8 * panels, 3.6))
    ax = axes[0] if panels == 2 else axes
    ax.bar(u, dist.pmf, width=0.9, color="#7fa8d0", label="exact pmf")
    if sd > 0:
        grid = np.linspace(max(1.0, mean - 5 * sd), min(dist.t, mean + 5 * sd), 400)
        ax.plot(grid, np.exp(-0.5 * ((grid - mean) / sd) ** 2) / (sd * math.sqrt(2 * math.pi)),
                color="#b4452c", label="normal density")
    ax.set_xlabel("distinct columns u")
    ax.set_ylabel("probability")
    ax.set_title(f"t = {dist.t}")
    ax.legend(frameon=False)
    if panels == 2:
        counts = np.asarray(unique_counts)
        ax2 = axes[1]
        lo, hi = counts.min() - 2, counts.max() + 2
        grid = np.linspace(lo, hi, 400)
        ax2.plot(grid, ndtr((grid - mean) / sd), color="#b4452c", label="normal CDF")
        ax2.step(np.sort(counts), np.arange(1, counts.size + 1) / counts.size,
                 where="post", color="#33547a", label=f"empirical CDF ({counts.size} draws)")
        ax2.set_xlabel("distinct columns u")
        ax2.set_ylabel("cumulative probability")
        ax2.legend(frameon=False, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return str(path)


def plot_pd_sweep(report, budget=None, path="pd_sweep.png", dpi: int = 150) -> str:
    """Observed and predicted positive-definiteness frequency against k.

    Vertical reference lines mark the analytic replicate budgets when a
    budget is supplied.
    """
    ks = [p.k for p in report.per_k]
    empirical = [p.empirical_pd_frequency for p in report.per_k]
    predicted = [p.predicted for p in report.per_k]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ks, predicted, color="#b4452c", lw=1.5, label="predicted")
    ax.plot(ks, empirical, "o", ms=4.5, color="#33547a",
            label=f"observed ({report.config.trials} trials)")
    if budget is not None:
        for value, style, name in (
            (budget.k_star, ":", "k*"),
            (budget.k_plus, "--", f"k+ (alpha={budget.alpha:.3g})"),
            (budget.k_limit, "-.", "large-system limit"),
        ):
            ax.axvline(value, ls=style, color="#666666", lw=1.0, label=name)
    ax.set_xlabel("bootstrap replicates k")
    ax.set_ylabel("P(average is positive-definite)")
    ax.set_title(f"n = {report.config.n}, t = {report.config.t}")
    ax.set_ylim(-0.04, 1.04)
    ax.legend(frameon=False, loc="center right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return str(path)
