"""Dissipative nonlinear Jaynes-Cummings simulator.

Closed-form spectral solution of the single-excitation master equation
(charge qubit + Kerr nanomechanical resonator), cross-validated against an
independent fixed-step RK4 integration of the same generator.
"""

from __future__ import annotations

from . import errors
from .errors import (
    ConfigError,
    GridTooLarge,
    NegativeNonlinearity,
    NegativeRate,
    NjcError,
    NonFiniteValue,
    NonPhysicalState,
    NonPositiveCoupling,
    NonPositiveFrequency,
    NonzeroChi,
    RegimeWarning,
    SingularBasis,
    StepTooLarge,
    TooSparse,
    UnequalRates,
    UnknownPreset,
    WindowTooLong,
)
from .experiments import (
    ORACLE_DT,
    RunResult,
    Scenario,
    SweepAxis,
    SweepGrid,
    export,
    format_number,
    parse_scenario_config,
    preset,
    run_scenario,
    run_sweep,
    validation_checks,
)
from .model import (
    BARE_LABELS,
    DIM,
    EigenStructure,
    ModelParams,
    dressed_transform,
    eigenstructure,
    hamiltonian_full,
    hamiltonian_jc,
    validate_params,
)
from .observables import (
    ExtremaList,
    SanityReport,
    excited_population,
    find_extrema,
    fit_short_time_rate,
    hermitian_eigenvalues,
    sanity,
    sanity_summary,
)
from .oracle import (
    Superoperator,
    Trajectory,
    build_liouvillian,
    integrate,
    unvec,
    vec,
    verify_eigenpairs,
)
from .spectral import (
    CoefficientSet,
    SpectralBasis,
    SpectralMode,
    eigenoperators,
    evolve_analytic,
    expand_initial,
    pe_closed_form,
    pe_closed_form_expanded,
    pe_equal_rates,
    pe_ideal,
    pe_linear_limit,
    pe_lower_envelope,
    short_time_rate,
)

__version__ = "0.1.0"

__all__ = [
    "BARE_LABELS",
    "DIM",
    "ORACLE_DT",
    "CoefficientSet",
    "ConfigError",
    "EigenStructure",
    "ExtremaList",
    "GridTooLarge",
    "ModelParams",
    "NegativeNonlinearity",
    "NegativeRate",
    "NjcError",
    "NonFiniteValue",
    "NonPhysicalState",
    "NonPositiveCoupling",
    "NonPositiveFrequency",
    "NonzeroChi",
    "RegimeWarning",
    "RunResult",
    "SanityReport",
    "Scenario",
    "SingularBasis",
    "SpectralBasis",
    "SpectralMode",
    "StepTooLarge",
    "Superoperator",
    "SweepAxis",
    "SweepGrid",
    "TooSparse",
    "Trajectory",
    "UnequalRates",
    "UnknownPreset",
    "WindowTooLong",
    "build_liouvillian",
    "dressed_transform",
    "eigenoperators",
    "eigenstructure",
    "errors",
    "evolve_analytic",
    "excited_population",
    "expand_initial",
    "export",
    "find_extrema",
    "fit_short_time_rate",
    "format_number",
    "hamiltonian_full",
    "hamiltonian_jc",
    "hermitian_eigenvalues",
    "integrate",
    "parse_scenario_config",
    "pe_closed_form",
    "pe_closed_form_expanded",
    "pe_equal_rates",
    "pe_ideal",
    "pe_linear_limit",
    "pe_lower_envelope",
    "preset",
    "run_scenario",
    "run_sweep",
    "sanity",
    "sanity_summary",
    "short_time_rate",
    "unvec",
    "validate_params",
    "validation_checks",
    "vec",
    "verify_eigenpairs",
]
