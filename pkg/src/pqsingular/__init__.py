"""Solver library for the parametric singular anisotropic (p,q)-Laplacian
Neumann problem in one dimension.

The pipeline mirrors the constructive existence argument: regularize the
singular term, solve the regularized problems by a fixed point of frozen
solves, pass eps -> 0 to the purely singular solution u_bar, then for each
lambda run a shifted monotone iteration from u_bar for the minimal solution
and a discretized mountain-pass search for the second one. A bisection on
lambda locates the admissibility threshold lambda_star.
"""

from .continuation import (
    Branch,
    BranchPoint,
    LambdaStarResult,
    bisect_lambda_star,
    build_branch,
)
from .energy import (
    DomainError,
    EnergySpec,
    SingularBase,
    SolveReport,
    Tridiag,
    TruncatedReaction,
    assemble_jacobian,
    assemble_residual,
    energy_eval,
    gradient_check,
    minimize_energy,
    solve_newton,
    truncate_reaction,
)
from .exponents import (
    ExponentField,
    SampledExponents,
    ValidationReport,
    affine,
    constant,
    critical_exponent,
    field_bounds,
    sinusoid,
    validate_h0_h1i,
)
from .mesh import (
    ConeReport,
    GridFunction,
    Mesh,
    build_uniform_mesh,
    cone_check,
    eval_with_gradient,
    integrate_qp,
)
from .modular import (
    ModularConfig,
    Prop1Report,
    luxemburg_norm,
    modular,
    norm_equivalence_probe,
    prop1_probe,
    sobolev_norm,
)
from .parametric import (
    LambdaProblem,
    MountainPassReport,
    VerificationReport,
    lambda0_estimate,
    minimal_solution_iterate,
    mountain_pass,
    solve_upper_hat,
    verify_solution,
)
from .reaction import (
    ArProbeResult,
    Reaction,
    ShiftEstimate,
    ar_probe,
    custom_reaction,
    eval_f_F,
    mu_hat_estimate,
    power_log_reaction,
    power_reaction,
    quasimono_probe,
    shifted_monotone_probe,
)
from .singular import (
    RegularizationSchedule,
    SingularSolution,
    solve_auxiliary,
    solve_pure_singular,
    solve_regularized,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BranchPoint",
    "LambdaStarResult",
    "bisect_lambda_star",
    "build_branch",
    "DomainError",
    "EnergySpec",
    "SingularBase",
    "SolveReport",
    "Tridiag",
    "TruncatedReaction",
    "assemble_jacobian",
    "assemble_residual",
    "energy_eval",
    "gradient_check",
    "minimize_energy",
    "solve_newton",
    "truncate_reaction",
    "ExponentField",
    "SampledExponents",
    "ValidationReport",
    "affine",
    "constant",
    "critical_exponent",
    "field_bounds",
    "sinusoid",
    "validate_h0_h1i",
    "ConeReport",
    "GridFunction",
    "Mesh",
    "build_uniform_mesh",
    "cone_check",
    "eval_with_gradient",
    "integrate_qp",
    "ModularConfig",
    "Prop1Report",
    "luxemburg_norm",
    "modular",
    "norm_equivalence_probe",
    "prop1_probe",
    "sobolev_norm",
    "LambdaProblem",
    "MountainPassReport",
    "VerificationReport",
    "lambda0_estimate",
    "minimal_solution_iterate",
    "mountain_pass",
    "solve_upper_hat",
    "verify_solution",
    "ArProbeResult",
    "Reaction",
    "ShiftEstimate",
    "ar_probe",
    "custom_reaction",
    "eval_f_F",
    "mu_hat_estimate",
    "power_log_reaction",
    "power_reaction",
    "quasimono_probe",
    "shifted_monotone_probe",
    "RegularizationSchedule",
    "SingularSolution",
    "solve_auxiliary",
    "solve_pure_singular",
    "solve_regularized",
    "__version__",
]
