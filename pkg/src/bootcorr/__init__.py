"""Bootstrap-average regularization of singular Pearson correlation matrices.

When a data matrix has more objects (n) than features (t), its Pearson
correlation matrix is singular.  Averaging the correlation matrices of k
column-resampled copies of the data restores positive-definiteness once
k exceeds a threshold near e/(e-1) * n/t; this package computes such
averages, predicts the required k analytically, and measures the
transition by Monte Carlo.
"""

from .corr import (
    BootstrapAverage,
    BootstrapIndex,
    CorrelationMatrix,
    DataMatrix,
    MatrixSource,
    TooManyDegenerateRedrawsError,
    ZeroVarianceRowError,
    average_correlation,
    bootstrap_replicate,
    draw_bootstrap_index,
    iter_bootstrap_replicates,
    pearson,
)
from .occupancy import (
    OccupancyDistribution,
    ZeroEigenModel,
    approx_moments,
    exact_moments,
    occupancy_cdf_vs_normal,
    occupancy_pmf,
    zero_count,
    zero_eigen_model,
)
from .predictor import (
    BootstrapBudget,
    PdPrediction,
    a_from_alpha,
    alpha_from_a,
    bootstrap_budget,
    k_limit,
    k_plus,
    k_star,
    prob_pd,
    recommended_k,
)
from .sim import (
    OccupancySweep,
    SimulationConfig,
    SimulationReport,
    ZetaCondition,
    check_zeta_condition,
    generate_data,
    run_occupancy_sweep,
    run_pd_sweep,
)
from .spectral import (
    NotSymmetricError,
    PdCheck,
    Spectrum,
    cholesky_is_positive_definite,
    eigenvalues,
    is_positive_definite,
)

__version__ = "0.1.0"
