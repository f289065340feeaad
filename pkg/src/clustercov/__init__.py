"""Coverage, ASE and EE analysis of clustered LPWA uplinks.

Receivers form a Poisson point process; their served nodes cluster
uniformly within a disc around each receiver; an independent Poisson field
models coexisting transmitters on the same channel.  The package provides
closed-form coverage/ASE/EE expressions (exact integrals and
Gauss-Chebyshev approximations) for fixed and Poisson cluster sizes, with
the typical node either uniformly chosen or distance-ranked, plus a Monte
Carlo simulator that cross-validates every expression.
"""

from ._accel import BACKEND as KERNEL_BACKEND
from .coverage import (
    BoundSide,
    CoverageResult,
    Interference,
    Method,
    Ordered,
    Scenario,
    Unordered,
    coverage,
    coverage_intra_limited,
    coverage_ordered_exact,
    coverage_ordered_gc,
    coverage_unordered_exact,
    coverage_unordered_gc,
)
from .geometry import (
    Realization,
    conditional_interferer_pdf,
    ordered_distance_pdf,
    sample_cluster,
    sample_ppp,
    sample_realization,
    unordered_distance_pdf,
)
from .laplace import (
    laplace_coexist,
    laplace_inter_fixed_upper,
    laplace_inter_random_lower,
    laplace_intra_fixed,
    laplace_intra_fixed_gc,
    laplace_intra_ordered_fixed,
    laplace_intra_ordered_fixed_gc,
    laplace_intra_ordered_random,
    laplace_intra_ordered_random_gc,
    laplace_intra_random,
    laplace_intra_random_gc,
)
from .mc import (
    InterferenceField,
    McEstimate,
    SimSpec,
    estimate_coverage,
    estimate_laplace,
    estimate_metrics,
    sinr_of_realization,
)
from .metrics import (
    MetricResult,
    area_spectral_efficiency,
    db_to_linear,
    dbm_to_mw,
    energy_efficiency,
    linear_to_db,
    mw_to_dbm,
    noise_power_mw,
    rate_from_threshold,
)
from .params import (
    FixedSize,
    LinkParams,
    NetworkConfig,
    PoissonSize,
    free_space_eta,
)
from .special import QuadratureSpec, beta_fn, gamma_fn, hyp2f1_1_b, make_quadrature

__version__ = "0.1.0"
