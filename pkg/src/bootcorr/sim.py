"""Monte Carlo harness for the positive-definiteness transition.

Generates synthetic standard-normal data, sweeps the replicate count k,
measures how often the bootstrap-averaged correlation matrix is
positive-definite, and aligns the observed frequencies with the
analytic curve.  Trials derive their random streams from (seed, trial
ordinal), so reports are reproducible and order-independent.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, PCG64

from . import corr, predictor, spectral
from .corr import DataMatrix
from .occupancy import occupancy_cdf_vs_normal

__all__ = [
    "SimulationConfig",
    "SweepPoint",
    "SimulationReport",
    "OccupancySweep",
    "ZetaCondition",
    "generate_data",
    "run_pd_sweep",
    "run_occupancy_sweep",
    "check_zeta_condition",
]

# Positive-definiteness in sweeps is certified at the eigensolver noise
# floor: the transition is governed by exact rank, and near its boundary
# an algebraically positive-definite average can have a smallest
# eigenvalue orders of magnitude below the generous default zero band,
# while true zeros stay at rounding level.
_CERTIFY_SCALE = spectral.SINGULARITY_ZERO_SCALE


@dataclass(frozen=True)
class SimulationConfig:
    """Sweep definition: data shape, replicate counts, trials, and seed."""

    n: int
    t: int
    k_values: tuple[int, ...]
    trials: int
    seed: int
    generator: str = "standard_normal"

    def __post_init__(self):
        if self.n < 2 or self.t < 2:
            raise ValueError("n and t must both be at least 2")
        ks = tuple(int(k) for k in self.k_values)
        if not ks or ks[0] < 1:
            raise ValueError("k_values must be a nonempty sequence of positive integers")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("k_values must be strictly increasing")
        if ks[-1] > 4 * self.n:
            raise ValueError(f"largest k ({ks[-1]}) must not exceed 4n = {4 * self.n}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.generator != "standard_normal":
            raise ValueError(f"unknown generator {self.generator!r}")
        object.__setattr__(self, "k_values", ks)


@dataclass(frozen=True)
class SweepPoint:
    k: int
    empirical_pd_frequency: float
    predicted: float
    mean_lambda0: float
    redraws: int


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    per_k: tuple[SweepPoint, ...]
    elapsed: float


@dataclass(frozen=True)
class OccupancySweep:
    """Sampled distinct-column counts with their empirical CDF over u = 1..t."""

    t: int
    samples: int
    seed: int
    unique_counts: np.ndarray
    ecdf: np.ndarray
    ks_distance: float


@dataclass(frozen=True)
class ZetaCondition:
    """Total replicate rank deficit against the intersection bound (k-1) n.

    When the summed zero counts of the k replicates stay within the
    bound, their null spaces cannot all share a direction (in generic
    position), so the average is positive-definite.
    """

    zeta: int
    bound: int
    pd_observed: bool
    zero_counts: tuple[int, ...]
    unique_counts: tuple[int, ...]


def generate_data(n: int, t: int, seed) -> DataMatrix:
    """n x t matrix of i.i.d. standard normal draws from a PCG64 stream.

    The generator algorithm is pinned (PCG64, numpy Generator
    standard_normal), so a given seed reproduces the same matrix.
    """
    if n < 2 or t < 2:
        raise ValueError("n and t must both be at least 2")
    stream = Generator(PCG64(corr._seed_sequence(seed)))
    return DataMatrix(stream.standard_normal((n, t)))


def run_pd_sweep(config: SimulationConfig) -> SimulationReport:
    """Measure the empirical positive-definiteness frequency at each k.

    Each trial draws fresh data and a fresh replicate sequence; the
    average at every requested k is exactly the prefix average of that
    sequence, matching ``corr.average_correlation`` for the same stream.
    """
    start = time.perf_counter()
    ks = config.k_values
    pd_counts = np.zeros(len(ks), dtype=np.int64)
    lambda0_sums = np.zeros(len(ks))
    redraw_totals = np.zeros(len(ks), dtype=np.int64)
    root = corr._seed_sequence(config.seed)
    for trial_sequence in root.spawn(config.trials):
        data_sequence, bootstrap_sequence = trial_sequence.spawn(2)
        data = generate_data(config.n, config.t, data_sequence)
        averages = corr.bootstrap_prefix_averages(data, ks, bootstrap_sequence)
        for slot, average in enumerate(averages):
            check = spectral.is_positive_definite(average.matrix, zero_scale=_CERTIFY_SCALE)
            pd_counts[slot] += bool(check.is_pd)
            lambda0_sums[slot] += check.smallest
            redraw_totals[slot] += average.redraws
    per_k = tuple(
        SweepPoint(
            k=k,
            empirical_pd_frequency=float(pd_counts[slot] / config.trials),
            predicted=predictor.prob_pd(config.n, config.t, k),
            mean_lambda0=float(lambda0_sums[slot] / config.trials),
            redraws=int(redraw_totals[slot]),
        )
        for slot, k in enumerate(ks)
    )
    return SimulationReport(config=config, per_k=per_k, elapsed=time.perf_counter() - start)


def run_occupancy_sweep(t: int, samples: int, seed: int) -> OccupancySweep:
    """Sample distinct-column counts and compare their CDF with the normal model."""
    if t < 2:
        raise ValueError("t must be at least 2")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    stream = Generator(PCG64(corr._seed_sequence(seed)))
    counts = np.empty(samples, dtype=np.int64)
    chunk = max(1, min(samples, 2_000_000 // t))
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        draws = np.sort(stream.integers(0, t, size=(size, t)), axis=1)
        counts[done:done + size] = (np.diff(draws, axis=1) != 0).sum(axis=1) + 1
        done += size
    counts.setflags(write=False)
    ecdf = np.searchsorted(np.sort(counts), np.arange(1, t + 1), side="right") / samples
    distance = occupancy_cdf_vs_normal(t, counts)
    return OccupancySweep(
        t=t,
        samples=samples,
        seed=int(seed),
        unique_counts=counts,
        ecdf=ecdf,
        ks_distance=distance,
    )


def check_zeta_condition(data: DataMatrix, k: int, seed) -> ZetaCondition:
    """Compare the summed replicate zero counts with the intersection bound.

    Runs the same replicate stream twice: once to collect each
    replicate's spectrum, once (via the shared prefix machinery) to form
    the average whose positive-definiteness is observed.
    """
    if not isinstance(data, DataMatrix):
        data = DataMatrix(np.asarray(data, dtype=float))
    zero_counts = []
    unique_counts = []
    for draw in corr.iter_bootstrap_replicates(data, k, seed):
        spectrum = spectral.eigenvalues(draw.matrix)
        zero_counts.append(spectrum.zero_count)
        unique_counts.append(draw.index.unique_count)
    average = corr.average_correlation(data, k, seed)
    verdict = spectral.is_positive_definite(average.matrix, zero_scale=_CERTIFY_SCALE)
    return ZetaCondition(
        zeta=int(sum(zero_counts)),
        bound=(k - 1) * data.n,
        pd_observed=bool(verdict.is_pd),
        zero_counts=tuple(zero_counts),
        unique_counts=tuple(unique_counts),
    )
