"""Longest-increasing-subsequence limit law, computable end to end.

Exact finite-N distributions, the Poissonized Toeplitz-determinant route,
the limit distribution via the connector solution of u'' = 2u^3 + xu,
closed-form asymptotics, and reproducible Monte Carlo.
"""

from .airy import AiryValue, airy
from .bessel import BesselMoment, bessel_i
from .combinat import (ExactProbability, Partition, Permutation,
                       brute_force_distribution, distribution_exact,
                       distribution_table, erdos_szekeres_floor, hook_count,
                       lis_length, partitions_first_row_at_most, transpose)
from .painleve import (PainleveSolution, TracyWidomTable, m1_22,
                       solve_hastings_mcleod, tracy_widom_table, tw_cdf,
                       tw_moments)
from .toeplitz import (LogDetResult, PoissonizedPoint, hankel_h,
                       hankel_h_truncated, kappa_sq, log_toeplitz_det, phi,
                       phi_via_kappa, phi_via_series, verify_hankel_toeplitz)
from .asymptotics import (EquilibriumMeasure, RegimeClassification,
                          SandwichBound, depoisson_bounds, equilibrium_measure,
                          eval_g, kappa_asymptotic, phi_asymptotic, rate_H,
                          rate_I, rate_U, scaled_cdf, variational_residual)
from .montecarlo import (SampleStats, estimate_limit_constants, ks_distance,
                         sample_hammersley, sample_lis, scaled_samples)
from .rng import SeededStream

__version__ = "0.1.0"
