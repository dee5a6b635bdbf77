"""Symmetric eigenvalue analysis and positive-definiteness certification.

Eigenvalues come from a dense symmetric solver (LAPACK via numpy).  A
matrix entry of the spectrum is declared zero when its magnitude falls
below ``zero_scale * n * max|eigenvalue|``; two scales are provided:

- ``DEFAULT_ZERO_SCALE`` (1e-8): generous zero band for counting the
  structural zero eigenvalues of rank-deficient correlation matrices.
- ``SINGULARITY_ZERO_SCALE`` (10 eps): eigensolver noise floor, for
  experiments that must distinguish exact singularity from genuinely
  positive but tiny smallest eigenvalues.  Near the transition where
  averaging first restores full rank, the smallest eigenvalue of an
  algebraically positive-definite average can sit far below the generous
  band while true zeros stay at rounding level, several orders of
  magnitude lower.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "DEFAULT_ZERO_SCALE",
    "SINGULARITY_ZERO_SCALE",
    "Spectrum",
    "PdCheck",
    "NotSymmetricError",
    "eigenvalues",
    "is_positive_definite",
    "cholesky_is_positive_definite",
]

DEFAULT_ZERO_SCALE = 1e-8
SINGULARITY_ZERO_SCALE = 10.0 * float(np.finfo(float).eps)

_SYMMETRY_TOL = 1e-12


class NotSymmetricError(ValueError):
    """The input matrix violates the symmetry tolerance."""


class PdCheck(NamedTuple):
    is_pd: bool
    smallest: float


@dataclass(frozen=True)
class Spectrum:
    """All eigenvalues of a symmetric matrix, sorted ascending.

    ``zero_count`` is the number of eigenvalues within ``zero_tolerance``
    of zero; ``smallest`` is the lowest eigenvalue.
    """

    eigenvalues: np.ndarray
    zero_tolerance: float
    zero_count: int
    smallest: float


def eigenvalues(matrix, zero_scale: float = DEFAULT_ZERO_SCALE) -> Spectrum:
    """Full spectrum of a symmetric matrix.

    Parameters
    ----------
    matrix : CorrelationMatrix or array-like
        Symmetric matrix (asymmetry above 1e-12 is rejected).
    zero_scale : float
        The zero band is ``zero_scale * n * max|eigenvalue|``.  Eigenvalues
        inside the band count as zero.

    Raises
    ------
    NotSymmetricError
        If the matrix is not symmetric within tolerance.
    """
    values = _symmetric_values(matrix)
    spectrum = np.linalg.eigvalsh(values)
    spectrum.setflags(write=False)
    tolerance = float(zero_scale * values.shape[0] * np.abs(spectrum).max()) if spectrum.size else 0.0
    count = int(np.count_nonzero(np.abs(spectrum) <= tolerance))
    return Spectrum(
        eigenvalues=spectrum,
        zero_tolerance=tolerance,
        zero_count=count,
        smallest=float(spectrum[0]),
    )


def is_positive_definite(matrix, zero_scale: float = DEFAULT_ZERO_SCALE) -> PdCheck:
    """Certify positive-definiteness via the eigensolver.

    True only when the smallest eigenvalue clears the zero band; a
    smallest eigenvalue inside the band is classified not positive-
    definite (certification errs on the safe side).  Returns the verdict
    together with the smallest eigenvalue.
    """
    spectrum = eigenvalues(matrix, zero_scale=zero_scale)
    return PdCheck(is_pd=spectrum.smallest > spectrum.zero_tolerance, smallest=spectrum.smallest)


def cholesky_is_positive_definite(matrix, zero_scale: float = DEFAULT_ZERO_SCALE) -> bool:
    """Cheap positive-definiteness test via triangular factorization.

    A successful factorization (all pivots positive) certifies the
    matrix; on failure the definitive eigensolver verdict is returned.
    The two routes can disagree only when the smallest eigenvalue sits
    near the zero band.
    """
    values = _symmetric_values(matrix)
    try:
        np.linalg.cholesky(values)
        return True
    except np.linalg.LinAlgError:
        return is_positive_definite(values, zero_scale=zero_scale).is_pd


def _symmetric_values(matrix) -> np.ndarray:
    values = getattr(matrix, "values", matrix)
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("matrix must be square")
    asymmetry = float(np.abs(values - values.T).max()) if values.size else 0.0
    if asymmetry > _SYMMETRY_TOL:
        raise NotSymmetricError(f"matrix is not symmetric: max|A - A^T| = {asymmetry:.3e}")
    return values
