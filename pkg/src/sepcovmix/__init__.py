"""Deterministic equivalents for the separable covariance mixture ensemble
Y = sum_r A_r X B_r, with Monte Carlo validation of the limiting laws."""

from .benchmarks import ExampleSpec, build_example, haar_unitary, random_permutation_matrix
from .detequiv import (
    DensityCurve,
    DualSolution,
    SolverOptions,
    companion_stieltjes,
    density_curve,
    det_resolvent_trace,
    dual_residual,
    solve_dual_system,
    support_bound,
)
from .ensemble import (
    ComplexGaussian,
    EmpiricalSpectrum,
    EntryDistribution,
    Rademacher,
    RealGaussian,
    ScaledStudentT,
    SimilarGaussian,
    build_Y,
    empirical_delta,
    empirical_spectrum,
    empirical_trace,
    sample_covariances,
    sample_X,
    similar_gaussian_coeffs,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    NumericError,
    SepCovMixError,
)
from .experiments import (
    ConvergenceTable,
    ErrorRecord,
    UniversalitySummary,
    run_density_overlay,
    run_error_study,
    run_universality,
)
from .linalg import (
    HermitianEigen,
    hermitian_eig,
    min_eigenvalue_hermitian,
    solve_shifted,
    spectral_norm,
)
from .model import (
    AssumptionReport,
    MixtureModel,
    check_assumptions,
    gram_matrices,
    load_model_spec,
    model_to_spec,
)

__version__ = "0.1.0"
