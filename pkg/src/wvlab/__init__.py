"""Numerical laboratory for the growth of analytic functions in the
unit disk: maximal term and central index, maximum modulus of rotated
lacunary series, gap statistics, and weighted measures of exceptional
radius sets."""

__version__ = "0.1.0"

from .errors import (
    BadParamError,
    DomainError,
    ExhaustedError,
    NonAnalyticError,
    NumericError,
    PhasesTooShortError,
    WvlabError,
)
from .series import (
    CoefficientSequence,
    GrowthProfile,
    Radius,
    ScanResult,
    analytic_check,
    geometric,
    growth_profile,
    log_G,
    log_S,
    max_term,
    moments_AB,
    power_exp,
    sqrt_exp,
    table,
    truncation_index,
)
from .phases import (
    ExplicitPhaseSequence,
    GammaStat,
    GeometricPowerPhaseSequence,
    PhaseFraction,
    PhaseSequence,
    gamma_stat,
    gen_geometric,
    gen_phi,
    phase_angle,
    phase_angles,
    read_phase_sequence,
    sample_u,
    suggest_bits,
    write_phase_sequence,
)
from .maxmod import MaxModResult, eval_rotated, max_modulus
from .wvstats import (
    CorollaryBounds,
    ExceptionalSet,
    WeightFunction,
    abstract_exponent,
    corollary_bounds,
    corollary_validity,
    delta_h,
    eq6_logG_bound,
    exceptional_flag,
    h_measure,
    lemma2_sequence,
    lemma4_A_log,
    lemma4_B2_proof_log,
    lemma4_B2_statement_log,
    log_measure,
    power_weight,
    rhs_theorem1,
    rhs_theorem2,
)
from .experiments import (
    ExperimentConfig,
    KahaneResult,
    run_baire_example,
    run_bound_audit,
    run_ensemble,
    run_kahane_search,
    run_profile,
    run_sharpness,
)

__all__ = [
    "__version__",
    # errors
    "WvlabError", "NonAnalyticError", "BadParamError", "PhasesTooShortError",
    "DomainError", "NumericError", "ExhaustedError",
    # series
    "Radius", "CoefficientSequence", "ScanResult", "GrowthProfile",
    "geometric", "sqrt_exp", "power_exp", "table",
    "max_term", "truncation_index", "log_G", "log_S", "moments_AB",
    "growth_profile", "analytic_check",
    # phases
    "PhaseSequence", "ExplicitPhaseSequence", "GeometricPowerPhaseSequence",
    "gen_geometric", "gen_phi", "GammaStat", "gamma_stat",
    "PhaseFraction", "phase_angle", "phase_angles", "sample_u",
    "suggest_bits", "write_phase_sequence", "read_phase_sequence",
    # maximum modulus
    "MaxModResult", "max_modulus", "eval_rotated",
    # statistics and bounds
    "WeightFunction", "log_measure", "power_weight",
    "ExceptionalSet", "h_measure", "delta_h", "exceptional_flag",
    "lemma2_sequence", "rhs_theorem1", "rhs_theorem2",
    "CorollaryBounds", "corollary_bounds", "corollary_validity",
    "abstract_exponent", "lemma4_A_log", "lemma4_B2_statement_log",
    "lemma4_B2_proof_log", "eq6_logG_bound",
    # experiments
    "ExperimentConfig", "run_profile", "run_sharpness", "run_ensemble",
    "run_bound_audit", "run_baire_example", "run_kahane_search",
    "KahaneResult",
]
