"""Pearson correlation, bootstrap column resampling, and replicate averaging.

The central object is the bootstrap-averaged correlation matrix: the
entrywise mean of k correlation matrices, each computed from the data
matrix with its columns resampled with replacement.  Averaging restores
positive-definiteness lost to rank deficiency when there are fewer
features than objects.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence

__all__ = [
    "MatrixSource",
    "DataMatrix",
    "BootstrapIndex",
    "CorrelationMatrix",
    "BootstrapAverage",
    "ReplicateDraw",
    "ZeroVarianceRowError",
    "TooManyDegenerateRedrawsError",
    "pearson",
    "draw_bootstrap_index",
    "bootstrap_replicate",
    "iter_bootstrap_replicates",
    "bootstrap_prefix_averages",
    "average_correlation",
    "PairwiseSum",
]

# A row is treated as constant when its centered magnitude is this far
# below the raw magnitude (relative threshold; exact float equality would
# miss constant rows whose mean is not exactly representable).
_ZERO_VARIANCE_RTOL = 1e-12

# Cumulative redraw budget per replicate ordinal; exceeding it signals
# pathological input (t = 1, near-constant rows) rather than bad luck.
_REDRAWS_PER_REPLICATE = 100


class ZeroVarianceRowError(ValueError):
    """A data row is constant, so its Pearson correlation is undefined."""

    def __init__(self, row: int, message: str | None = None):
        self.row = row
        super().__init__(message or f"row {row} has zero variance")


class TooManyDegenerateRedrawsError(RuntimeError):
    """Bootstrap redraws exceeded the budget; the input is degenerate."""


class MatrixSource(enum.Enum):
    PLAIN = "plain"
    BOOTSTRAP_REPLICATE = "bootstrap_replicate"
    BOOTSTRAP_AVERAGE = "bootstrap_average"


@dataclass(frozen=True)
class DataMatrix:
    """n x t real data matrix: n objects (rows) observed over t features (columns).

    Rows must be non-constant so that every pairwise Pearson correlation
    is defined.  Values are frozen after construction and safe to share.
    """

    values: np.ndarray
    row_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise ValueError("data matrix must be two-dimensional")
        n, t = values.shape
        if n < 2 or t < 2:
            raise ValueError(f"data matrix must be at least 2x2, got {n}x{t}")
        if not np.isfinite(values).all():
            raise ValueError("data matrix entries must be finite")
        bad = _zero_variance_rows(values)
        if bad.size:
            raise ZeroVarianceRowError(int(bad[0]))
        if self.row_labels is not None and len(self.row_labels) != n:
            raise ValueError("row_labels length must equal the number of rows")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def t(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class BootstrapIndex:
    """One resampling of the t column indices, with its distinct count."""

    indices: np.ndarray
    unique_count: int

    def __post_init__(self):
        indices = np.array(self.indices, dtype=np.int64, copy=True)
        t = indices.size
        if indices.ndim != 1 or t == 0:
            raise ValueError("indices must be a nonempty vector")
        if indices.min() < 0 or indices.max() >= t:
            raise ValueError("every index must lie in [0, t-1]")
        if self.unique_count != np.unique(indices).size:
            raise ValueError("unique_count does not match the indices")
        indices.setflags(write=False)
        object.__setattr__(self, "indices", indices)

    @property
    def t(self) -> int:
        return self.indices.size


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric, unit-diagonal correlation matrix with its provenance.

    ``k`` is the number of averaged replicates (1 for a plain matrix or a
    single replicate).  Construction checks symmetry, diagonal, and entry
    range; positive semi-definiteness is the eigensolver's concern (see
    the spectral module).
    """

    values: np.ndarray
    source: MatrixSource = MatrixSource.PLAIN
    k: int = 1

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("correlation matrix must be square")
        if not np.isfinite(values).all():
            raise ValueError("correlation matrix entries must be finite")
        if np.abs(values - values.T).max() > 1e-12:
            raise ValueError("correlation matrix must be symmetric within 1e-12")
        if np.abs(np.diagonal(values) - 1.0).max() > 1e-12:
            raise ValueError("correlation matrix diagonal must be 1 within 1e-12")
        if np.abs(values).max() > 1.0 + 1e-12:
            raise ValueError("correlation entries must lie in [-1, 1] within 1e-12")
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


class ReplicateDraw(NamedTuple):
    matrix: CorrelationMatrix
    index: BootstrapIndex
    redraws: int  # cumulative redraw count up to and including this replicate


class BootstrapAverage(NamedTuple):
    matrix: CorrelationMatrix
    unique_counts: np.ndarray
    redraws: int


def pearson(data, source: MatrixSource = MatrixSource.PLAIN, k: int = 1) -> CorrelationMatrix:
    """Pairwise Pearson correlations between the rows of a data matrix.

    Rows are mean-centered and scaled by their population standard
    deviation; the Gram product of the standardized rows then gives the
    correlation matrix directly.  The diagonal is set to its exact value
    of 1.  For generic data the result has rank min{n, t-1}: centering
    removes one dimension from the row space.

    Parameters
    ----------
    data : DataMatrix or array-like
        n x t matrix with n >= 2 rows and t >= 2 columns.

    Raises
    ------
    ZeroVarianceRowError
        If some row is constant (correlation undefined).
    """
    X = data.values if isinstance(data, DataMatrix) else np.asarray(data, dtype=float)
    if X.ndim != 2:
        raise ValueError("data must be two-dimensional")
    n, t = X.shape
    if n < 2 or t < 2:
        raise ValueError(f"data must be at least 2x2, got {n}x{t}")
    if not np.isfinite(X).all():
        raise ValueError("data entries must be finite")
    centered = X - X.mean(axis=1, keepdims=True)
    bad = _zero_variance_rows(X, centered)
    if bad.size:
        raise ZeroVarianceRowError(int(bad[0]))
    scale = np.sqrt(np.mean(centered * centered, axis=1))
    standardized = centered / (scale[:, None] * math.sqrt(t))
    values = standardized @ standardized.T
    np.fill_diagonal(values, 1.0)
    return CorrelationMatrix(values, source=source, k=k)


def draw_bootstrap_index(t: int, stream: Generator) -> BootstrapIndex:
    """Draw t column indices uniformly with replacement from [0, t-1]."""
    if t < 1:
        raise ValueError("t must be a positive integer")
    indices = stream.integers(0, t, size=t)
    return BootstrapIndex(indices=indices, unique_count=int(np.unique(indices).size))


def bootstrap_replicate(data: DataMatrix, index: BootstrapIndex) -> CorrelationMatrix:
    """Correlation matrix of the column-resampled data.

    Raises ZeroVarianceRowError when the resampling makes some row
    constant (always when only one distinct column was drawn); callers
    redraw such degenerate replicates.
    """
    X = data.values if isinstance(data, DataMatrix) else np.asarray(data, dtype=float)
    if index.t != X.shape[1]:
        raise ValueError(f"index length {index.t} does not match data with t={X.shape[1]}")
    # C-contiguous copy so that row reductions sum in the same order as
    # for the original matrix (identity resampling reproduces it bitwise)
    resampled = np.ascontiguousarray(X[:, index.indices])
    return pearson(resampled, source=MatrixSource.BOOTSTRAP_REPLICATE)


def iter_bootstrap_replicates(data: DataMatrix, k: int, seed) -> Iterator[ReplicateDraw]:
    """Yield k valid bootstrap replicate correlation matrices.

    Replicate i draws from its own stream derived from (seed, ordinal i),
    so results do not depend on evaluation order and any prefix of the
    sequence is identical for any larger k.  Degenerate resamplings are
    redrawn from the same stream and counted; the cumulative redraw count
    may not exceed 100 per replicate ordinal.

    ``seed`` is a nonnegative int or a freshly constructed SeedSequence.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not isinstance(data, DataMatrix):
        data = DataMatrix(np.asarray(data, dtype=float))
    redraws = 0
    for ordinal, child in enumerate(_seed_sequence(seed).spawn(k)):
        stream = Generator(PCG64(child))
        while True:
            index = draw_bootstrap_index(data.t, stream)
            try:
                matrix = bootstrap_replicate(data, index)
                break
            except ZeroVarianceRowError:
                redraws += 1
                if redraws > _REDRAWS_PER_REPLICATE * (ordinal + 1):
                    raise TooManyDegenerateRedrawsError(
                        f"{redraws} degenerate redraws within {ordinal + 1} replicates; "
                        "the input cannot produce valid bootstrap correlations"
                    ) from None
        yield ReplicateDraw(matrix=matrix, index=index, redraws=redraws)


def bootstrap_prefix_averages(data: DataMatrix, k_values, seed) -> Iterator[BootstrapAverage]:
    """Yield the bootstrap average at each requested replicate count.

    ``k_values`` must be strictly increasing.  The average emitted at k is
    bit-identical to ``average_correlation(data, k, seed)``: replicate
    streams depend only on (seed, ordinal) and the accumulator sums in a
    fixed pairwise order, so prefixes are shared exactly.
    """
    ks = [int(k) for k in k_values]
    if not ks or any(b <= a for a, b in zip(ks, ks[1:])) or ks[0] < 1:
        raise ValueError("k_values must be a nonempty strictly increasing sequence of positive integers")
    targets = set(ks)
    accumulator = PairwiseSum()
    unique_counts: list[int] = []
    for draw in iter_bootstrap_replicates(data, ks[-1], seed):
        accumulator.add(draw.matrix.values)
        unique_counts.append(draw.index.unique_count)
        k = len(unique_counts)
        if k in targets:
            mean = accumulator.total() / k
            yield BootstrapAverage(
                matrix=CorrelationMatrix(mean, source=MatrixSource.BOOTSTRAP_AVERAGE, k=k),
                unique_counts=np.array(unique_counts),
                redraws=draw.redraws,
            )


def average_correlation(data: DataMatrix, k: int, seed) -> BootstrapAverage:
    """Entrywise mean of k bootstrap replicate correlation matrices.

    Deterministic for fixed (data, k, seed).  Returns the averaged matrix
    together with each replicate's distinct-column count and the total
    number of degenerate redraws.

    Raises
    ------
    TooManyDegenerateRedrawsError
        If redraws exceed 100 per replicate, which signals input that
        cannot yield valid replicates (for example near-constant rows).
    """
    for result in bootstrap_prefix_averages(data, [k], seed):
        return result
    raise AssertionError("unreachable")


class PairwiseSum:
    """Streaming pairwise summation of equal-shape arrays.

    Sums in a fixed binary-tree order (independent of how results are
    consumed), keeping rounding error near eps * log2(k) and making
    accumulated averages reproducible bit for bit.
    """

    def __init__(self):
        self._levels: list[np.ndarray | None] = []
        self.count = 0

    def add(self, values: np.ndarray) -> None:
        carry = np.array(values, dtype=float, copy=True)
        level = 0
        while level < len(self._levels) and self._levels[level] is not None:
            carry = self._levels[level] + carry
            self._levels[level] = None
            level += 1
        if level == len(self._levels):
            self._levels.append(carry)
        else:
            self._levels[level] = carry
        self.count += 1

    def total(self) -> np.ndarray:
        """Sum of everything added so far (non-destructive)."""
        if self.count == 0:
            raise ValueError("no arrays have been added")
        acc: np.ndarray | None = None
        for stored in self._levels:
            if stored is None:
                continue
            acc = stored.copy() if acc is None else stored + acc
        assert acc is not None
        return acc


def _zero_variance_rows(X: np.ndarray, centered: np.ndarray | None = None) -> np.ndarray:
    if centered is None:
        centered = X - X.mean(axis=1, keepdims=True)
    spread = np.abs(centered).max(axis=1)
    magnitude = np.maximum(1.0, np.abs(X).max(axis=1))
    return np.flatnonzero(spread <= _ZERO_VARIANCE_RTOL * magnitude)


def _seed_sequence(seed) -> SeedSequence:
    if isinstance(seed, SeedSequence):
        return seed
    return SeedSequence(int(seed) % 2**64)
