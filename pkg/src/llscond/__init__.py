"""Condition numbers and perturbation experiments for full-rank linear
least-squares solutions, with scaled 2-norm perturbation measures.
"""

__version__ = "0.1.0"

from .catalog import (
    DEFAULT_GRATTON_WEIGHTS,
    BoundCatalogEntry,
    EntryStatus,
    GrattonWeights,
    NormRegime,
    evaluate_catalog,
    overestimate_ratio,
)
from .conditioning import (
    ConditionReport,
    JointEstimate,
    OptimizerConfig,
    ScaleFactors,
    SphereMaxResult,
    chi_A_bounds,
    chi_A_exact,
    chi_b,
    chi_joint_estimate,
    condition_report,
    dual_norm_certificate,
    rank2_map,
)
from .estimator import ConditionedLeastSquares
from .exceptions import (
    DegenerateVectorsError,
    FactorizationError,
    LlsCondError,
    ParseError,
    RankDeficientError,
    ValidationError,
    ZeroSolutionError,
)
from .family import ClosedForms, ExampleSpec, closed_forms, example_perturbation, example_problem
from .linalg import (
    RANK_TOLERANCE,
    SvdResult,
    nuclear_norm,
    qr_least_squares,
    singular_values,
    spectral_norm,
    svd,
)
from .perturb import (
    PerturbationTrial,
    TrialSummary,
    finite_difference_chi_b,
    perturbed_solve,
    run_trials,
    worst_case_perturbation,
)
from .problem import Geometry, LlsProblem, LlsSolution, build_problem, geometry, solve
from .rank2 import (
    GramRepresentation,
    Rank2Outer,
    gram_reduce,
    pair_cosine,
    rank2_frobenius_norm,
    rank2_nuclear_norm,
)

__all__ = [
    "BoundCatalogEntry",
    "ClosedForms",
    "ConditionReport",
    "ConditionedLeastSquares",
    "DEFAULT_GRATTON_WEIGHTS",
    "DegenerateVectorsError",
    "EntryStatus",
    "ExampleSpec",
    "FactorizationError",
    "Geometry",
    "GramRepresentation",
    "GrattonWeights",
    "JointEstimate",
    "LlsCondError",
    "LlsProblem",
    "LlsSolution",
    "NormRegime",
    "OptimizerConfig",
    "ParseError",
    "PerturbationTrial",
    "RANK_TOLERANCE",
    "Rank2Outer",
    "RankDeficientError",
    "ScaleFactors",
    "SphereMaxResult",
    "SvdResult",
    "TrialSummary",
    "ValidationError",
    "ZeroSolutionError",
    "build_problem",
    "chi_A_bounds",
    "chi_A_exact",
    "chi_b",
    "chi_joint_estimate",
    "closed_forms",
    "condition_report",
    "dual_norm_certificate",
    "evaluate_catalog",
    "example_perturbation",
    "example_problem",
    "finite_difference_chi_b",
    "geometry",
    "gram_reduce",
    "nuclear_norm",
    "overestimate_ratio",
    "pair_cosine",
    "perturbed_solve",
    "qr_least_squares",
    "rank2_frobenius_norm",
    "rank2_map",
    "rank2_nuclear_norm",
    "run_trials",
    "singular_values",
    "solve",
    "spectral_norm",
    "svd",
    "worst_case_perturbation",
]
