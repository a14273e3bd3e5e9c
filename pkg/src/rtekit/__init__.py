"""rtekit: Renyi transfer entropy between time series.

Nearest-neighbor Renyi/Shannon entropy estimation with rank ensembles,
transfer-entropy variants with surrogate bias correction, closed-form
Gaussian and heavy-tailed cross-checks, and coupled-Rossler experiments
for coupling-direction and synchronization-threshold detection.
"""

from .analytic import (GaussianModel, RegressionFit, alpha_gaussian_cond_mi,
                       alpha_gaussian_entropy_unit, escort_distribution,
                       gaussian_renyi_entropy, granger_f, least_squares_fit,
                       taylor_correction)
from .config import load_config, load_preset, parse_config_text
from .dynamics import (RosslerParams, Trajectory, integrate_coupled,
                       lyapunov_spectrum, rossler_rhs,
                       slave_conditional_exponents)
from .errors import (ConfigError, ConvergenceRangeError, DegenerateSampleError,
                     DivergenceError, DomainError, RankDeficiencyError,
                     RtekitError)
from .estimator import (EntropyEstimate, EstimatorConfig,
                        conditional_renyi_entropy, entropy_ensemble,
                        renyi_entropy_knn, shannon_entropy_knn)
from .infoflow import (LagSpec, TransferResult, delay_embed, rte, rte_balance,
                       rte_balance_effective, rte_effective)
from .neighbors import NeighborTable, PointCloud, knn_table
from .special import digamma, gamma_ln, unit_ball_volume
from .surrogates import phase_surrogate, shuffle_surrogate
from .sweep import (SweepConfig, SweepResult, SweepRow, emit_csv, emit_plot,
                    parse_csv, run_sweep)

__version__ = "0.1.0"
