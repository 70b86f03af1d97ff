"""helsonspec: spectral numerics for the multiplicative Hilbert matrix, the
one-parameter Helson family M(g_a) and their integral Hankel counterparts.

The package builds finite models of these operators (truncations and Nystrom
discretizations), verifies their key spectral properties at desk scale, and
estimates the quantities with no known closed form: the critical parameter
a* and the eigenvalue curve lambda(a).
"""

__version__ = "0.1.0"

from ._backend import BACKEND, HAS_NUMBA
from .errors import (
    ConfigurationError,
    DiagnosticError,
    DomainError,
    HelsonSpecError,
    IterationError,
    NumericError,
    UsageError,
)
from .specialfn import (
    KernelFamily,
    KernelSpec,
    bessel_k_imag_order,
    k_of_lambda,
    kernel_eval,
    lambda_of_k,
    log_gamma_complex,
    psi_k,
    riemann_zeta_real,
)
from .gridquad import (
    Grid,
    SymmetricMatrix,
    build_grid,
    discretize_hankel,
    load_matrix,
    project_function,
    quad_integral,
    reference_grid,
    save_matrix,
)
from .helson import (
    HelsonTruncation,
    factor_map,
    helson_matrix,
    helson_operator,
    multiplicative_hilbert_matrix,
    quadratic_form_exp,
)
from .eigensolve import EigenResult, count_above, eigen_full, top_eigenpairs
from .mellin import (
    MellinSample,
    carleman_multiplier,
    mellin_critical_line,
    multiplier_check,
    plancherel_error,
    theta_zero,
)
from .spectra import (
    AStarEstimate,
    CurvePoint,
    EquivalenceReport,
    ExperimentConfig,
    MonotonicityReport,
    MultiplicityReport,
    SpectrumReport,
    eigenfunction_residual,
    equivalence_check,
    estimate_a_star,
    hs_gap,
    lambda_curve,
    monotonicity_check,
    multiplicity_diagnostic,
    spectrum_report,
)

__all__ = [
    "__version__",
    "BACKEND",
    "HAS_NUMBA",
    "HelsonSpecError",
    "DomainError",
    "ConfigurationError",
    "NumericError",
    "IterationError",
    "DiagnosticError",
    "UsageError",
    "KernelFamily",
    "KernelSpec",
    "riemann_zeta_real",
    "kernel_eval",
    "log_gamma_complex",
    "bessel_k_imag_order",
    "lambda_of_k",
    "k_of_lambda",
    "psi_k",
    "Grid",
    "build_grid",
    "reference_grid",
    "SymmetricMatrix",
    "discretize_hankel",
    "project_function",
    "quad_integral",
    "save_matrix",
    "load_matrix",
    "HelsonTruncation",
    "helson_matrix",
    "multiplicative_hilbert_matrix",
    "helson_operator",
    "factor_map",
    "quadratic_form_exp",
    "EigenResult",
    "eigen_full",
    "top_eigenpairs",
    "count_above",
    "MellinSample",
    "mellin_critical_line",
    "carleman_multiplier",
    "multiplier_check",
    "plancherel_error",
    "theta_zero",
    "ExperimentConfig",
    "CurvePoint",
    "AStarEstimate",
    "SpectrumReport",
    "EquivalenceReport",
    "MonotonicityReport",
    "MultiplicityReport",
    "lambda_curve",
    "estimate_a_star",
    "spectrum_report",
    "equivalence_check",
    "eigenfunction_residual",
    "hs_gap",
    "monotonicity_check",
    "multiplicity_diagnostic",
]
