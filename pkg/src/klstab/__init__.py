"""Strong (GKS) stability verification for totally upwind one-step schemes.

Builds the Kreiss-Lopatinskii determinant of a (scheme, boundary condition)
pair on the half line, counts its zeros outside the closed unit disk via an
adaptive winding number, cross-checks by direct polynomial root counting,
classifies zeros on the unit circle, and corroborates verdicts with
time-domain simulation.
"""

from .config import DEFAULT_TOLS, Tolerances
from .core_numerics import ComplexPolynomial, RootSet, poly_eval, poly_roots
from .scheme import (
    AssumptionReport,
    CurveSamples,
    Scheme,
    make_beam_warming,
    sample_symbol_curve,
    scheme_from_descriptor,
    symbol,
    validate,
)
from .boundary import (
    BoundaryCondition,
    assemble_B,
    boundary_from_descriptor,
    custom_condition,
    silw_condition,
)
from .kl import (
    ExteriorRootCount,
    KMatrix,
    ReducedBoundary,
    characteristic_poly,
    exterior_zero_count_direct,
    k_matrix,
    kl_det_direct,
    kl_det_explicit,
    kl_det_raw,
    reduce_boundary,
    stable_roots,
)
from .winding import (
    RefinementPolicy,
    WindingResult,
    curve_to_csv,
    exterior_zero_count_winding,
    kl_curve_evaluator,
    sample_kl_curve,
    winding_number,
)
from .analyzer import (
    BoundaryZero,
    BoundaryZeroType,
    StabilityMap,
    StabilityStatus,
    StabilityVerdict,
    analyze,
    bisect_stability_edge,
    classify_boundary_zero,
    sweep,
)
from .simulator import GaussianPulse, IBVPRun, SigmaScan, SolutionField, run_ibvp, sigma_scan
from .cli import run_cli
from . import errors

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport",
    "BoundaryCondition",
    "BoundaryZero",
    "BoundaryZeroType",
    "ComplexPolynomial",
    "CurveSamples",
    "DEFAULT_TOLS",
    "ExteriorRootCount",
    "GaussianPulse",
    "IBVPRun",
    "KMatrix",
    "ReducedBoundary",
    "RefinementPolicy",
    "RootSet",
    "Scheme",
    "SigmaScan",
    "SolutionField",
    "StabilityMap",
    "StabilityStatus",
    "StabilityVerdict",
    "Tolerances",
    "WindingResult",
    "analyze",
    "assemble_B",
    "bisect_stability_edge",
    "boundary_from_descriptor",
    "characteristic_poly",
    "classify_boundary_zero",
    "curve_to_csv",
    "custom_condition",
    "errors",
    "exterior_zero_count_direct",
    "exterior_zero_count_winding",
    "k_matrix",
    "kl_curve_evaluator",
    "kl_det_direct",
    "kl_det_explicit",
    "kl_det_raw",
    "make_beam_warming",
    "poly_eval",
    "poly_roots",
    "reduce_boundary",
    "run_cli",
    "run_ibvp",
    "sample_kl_curve",
    "sample_symbol_curve",
    "scheme_from_descriptor",
    "sigma_scan",
    "silw_condition",
    "stable_roots",
    "sweep",
    "symbol",
    "validate",
    "winding_number",
]
