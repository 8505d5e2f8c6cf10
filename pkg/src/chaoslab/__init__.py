"""Exact computation on degree-2 Rademacher chaos: distributions, symmetric-space
norms, and extremal sign-matrix statistics on the interval and the square."""

from .chaos import (
    apply_signs,
    as_coefficient_matrix,
    as_sign_matrix,
    chaos_coefficients,
    decouple_identity_rhs,
    eval_decoupled,
    eval_undecoupled,
    shift_map,
)
from .dyadic import (
    DyadicPoint,
    StepFunction1D,
    StepFunction2D,
    dyadic_add,
    materialize_1d,
    rademacher,
    walsh,
)
from .errors import (
    ChaosLabError,
    EnumerationCapError,
    InsufficientPrecisionError,
    MatrixParseError,
    QuadratureError,
)
from .extremal import (
    SearchReport,
    Theorem7Report,
    exact_average,
    exhaustive_inf,
    monte_carlo_average,
    sidon_defect,
    sup_norm_decoupled,
    sup_norm_undecoupled,
    theorem7_witness,
    walsh_sign_arrangement,
)
from .rearrange import (
    Distribution,
    Rearrangement,
    distribution,
    equimeasurable,
    log_distribution_L,
    rearrangement,
)
from .spaces import (
    SpaceSpec,
    exp_moment,
    lorentz_norm,
    lp_norm,
    marcinkiewicz_norm,
    orlicz_exp_norm,
    parse_space,
    phi_eps,
    quasinorm_phi_eps,
)

__version__ = "0.1.0"

__all__ = [
    "DyadicPoint",
    "StepFunction1D",
    "StepFunction2D",
    "rademacher",
    "walsh",
    "dyadic_add",
    "materialize_1d",
    "as_coefficient_matrix",
    "as_sign_matrix",
    "eval_decoupled",
    "eval_undecoupled",
    "decouple_identity_rhs",
    "apply_signs",
    "chaos_coefficients",
    "shift_map",
    "Distribution",
    "Rearrangement",
    "distribution",
    "rearrangement",
    "equimeasurable",
    "log_distribution_L",
    "SpaceSpec",
    "parse_space",
    "lp_norm",
    "exp_moment",
    "orlicz_exp_norm",
    "marcinkiewicz_norm",
    "phi_eps",
    "quasinorm_phi_eps",
    "lorentz_norm",
    "SearchReport",
    "Theorem7Report",
    "sup_norm_decoupled",
    "sup_norm_undecoupled",
    "walsh_sign_arrangement",
    "exhaustive_inf",
    "exact_average",
    "monte_carlo_average",
    "sidon_defect",
    "theorem7_witness",
    "ChaosLabError",
    "EnumerationCapError",
    "InsufficientPrecisionError",
    "MatrixParseError",
    "QuadratureError",
]
