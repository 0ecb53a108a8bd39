"""One-bit compressive sensing via double-sparsity constrained optimization.

Library layout:

* :mod:`onebitcs.model` -- problem data, objective/gradient, eigenvalue bounds
* :mod:`onebitcs.projections` -- exact projections onto the feasible set
* :mod:`onebitcs.optimality` -- stationarity and global-optimality certificates
* :mod:`onebitcs.gpsp` -- the gradient projection subspace pursuit solver
* :mod:`onebitcs.biht` -- binary iterative hard thresholding baseline
* :mod:`onebitcs.datagen` -- seeded synthetic instance generators
* :mod:`onebitcs.metrics` -- SNR / Hamming recovery metrics
* :mod:`onebitcs.cli` -- benchmark harness (generate / solve / sweep / certify)
"""

from .biht import biht_solve
from .datagen import GenSpec, GroundTruth, gen_correlated, gen_independent, generate, sgn, signum
from .exceptions import LineSearchStallError, UnsupportedSizeError, ZeroSignalError
from .gpsp import (
    SolverConfig,
    SolverResult,
    armijo_step,
    gpsp_solve,
    normalize_output,
    subspace_solve,
    subspace_trigger,
)
from .metrics import hamming_distance, hamming_error, snr
from .model import (
    EigenBounds,
    Iterate,
    ModelParams,
    ProblemData,
    default_params,
    eigen_bounds,
    gradient,
    hessian_h,
    objective,
)
from .optimality import (
    ErrorBoundDiagnostic,
    StationarityReport,
    certify_global,
    check_local_kkt,
    check_tau_stationary,
    error_bound_diagnostic,
    tau_star,
    zero_solution_excluded,
)
from .projections import (
    IndexPartition,
    index_partition,
    project_f,
    project_k,
    project_s,
    selection_backend,
    theta_support,
    top_s_support,
)

__version__ = "0.1.0"

__all__ = [
    "EigenBounds",
    "ErrorBoundDiagnostic",
    "GenSpec",
    "GroundTruth",
    "IndexPartition",
    "Iterate",
    "LineSearchStallError",
    "ModelParams",
    "ProblemData",
    "SolverConfig",
    "SolverResult",
    "StationarityReport",
    "UnsupportedSizeError",
    "ZeroSignalError",
    "armijo_step",
    "biht_solve",
    "certify_global",
    "check_local_kkt",
    "check_tau_stationary",
    "default_params",
    "eigen_bounds",
    "error_bound_diagnostic",
    "gen_correlated",
    "gen_independent",
    "generate",
    "gpsp_solve",
    "gradient",
    "hamming_distance",
    "hamming_error",
    "hessian_h",
    "index_partition",
    "normalize_output",
    "objective",
    "project_f",
    "project_k",
    "project_s",
    "selection_backend",
    "sgn",
    "signum",
    "snr",
    "subspace_solve",
    "subspace_trigger",
    "tau_star",
    "theta_support",
    "top_s_support",
    "zero_solution_excluded",
]
