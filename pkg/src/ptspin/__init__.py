"""Point interactions with spin coupling: boundary-condition families,
two-body exchange operators, factorization checks, Bethe-type coefficient
propagation, and bound-state construction with independent numerical oracles.
"""
from .linalg import (
    SingularMatrixError,
    SpinDims,
    embed_pair,
    exchange_operator,
    inverse,
    max_abs,
    swap_pair,
)
from .boundary import (
    NonseparatedBC,
    ParseError,
    ScalarBC,
    SeparatedBC,
    ValidationReport,
    boundary_condition_to_json,
    compatibility_residual,
    delta_prime_type,
    delta_type,
    hspin,
    lift_scalar,
    load_boundary_condition,
    parse_boundary_condition,
    scalar_pt_type1,
    scalar_pt_type2,
    scalar_sa_nonseparated,
    scalar_sa_separated,
    validate_nonseparated_pt,
    validate_selfadjoint,
    validate_separated_pt,
    validate_separated_selfadjoint,
)
from .scattering import (
    Kinematics,
    Statistics,
    make_y_factory,
    statistics_swap,
    y_inverse_residual,
    y_nonseparated,
    y_separated,
    ybe_residual,
)
from .bethe import (
    BetheState,
    SignPattern,
    bethe_coefficients,
    boundary_jump_residual,
    evaluate_wavefunction,
    path_consistency,
)
from .spectra import (
    BoundState,
    BoundStateNotFound,
    SpectrumReport,
    bound_energy,
    classify_spectrum,
    n_particle_bound_state,
    negative_real_eigenvalues,
    two_particle_bound_states,
    verify_bound_state_fd,
)

__version__ = "0.1.0"

__all__ = [
    "SingularMatrixError",
    "SpinDims",
    "embed_pair",
    "exchange_operator",
    "inverse",
    "max_abs",
    "swap_pair",
    "NonseparatedBC",
    "ParseError",
    "ScalarBC",
    "SeparatedBC",
    "ValidationReport",
    "boundary_condition_to_json",
    "compatibility_residual",
    "delta_prime_type",
    "delta_type",
    "hspin",
    "lift_scalar",
    "load_boundary_condition",
    "parse_boundary_condition",
    "scalar_pt_type1",
    "scalar_pt_type2",
    "scalar_sa_nonseparated",
    "scalar_sa_separated",
    "validate_nonseparated_pt",
    "validate_selfadjoint",
    "validate_separated_pt",
    "validate_separated_selfadjoint",
    "Kinematics",
    "Statistics",
    "make_y_factory",
    "statistics_swap",
    "y_inverse_residual",
    "y_nonseparated",
    "y_separated",
    "ybe_residual",
    "BetheState",
    "SignPattern",
    "bethe_coefficients",
    "boundary_jump_residual",
    "evaluate_wavefunction",
    "path_consistency",
    "BoundState",
    "BoundStateNotFound",
    "SpectrumReport",
    "bound_energy",
    "classify_spectrum",
    "n_particle_bound_state",
    "negative_real_eigenvalues",
    "two_particle_bound_states",
    "verify_bound_state_fd",
    "__version__",
]
