"""Entropy-stable non-oscillatory finite-difference fluxes for hyperbolic conservation laws."""

from ._backend import BACKEND
from .ecflux import ec2_flux, ec4_flux, ec6_flux, ec_coefficients, entropy_flux_2p, entropy_flux_q2
from .errors import CapabilityError, ConfigurationError, DomainError, NonPhysicalStateError, ParameterError
from .esflux import InterfaceRecord, SelectorConfig, entropy_dissipation_check, esno_flux, interface_entropy_flux, sign_match
from .harness import ConvergenceRow, convergence_study, error_norms, observed_order, oscillation_metrics, symmetry_check_2d
from .integrator import (
    EntropyReport,
    Field,
    Grid,
    TimeControl,
    apply_boundary,
    compute_dt,
    run,
    semi_discrete_rhs,
    ssp_rk3_step,
    step_2d,
)
from .models import (
    EntropyPairValues,
    SystemModel,
    conserved_from_primitive,
    entropy_pair,
    max_wavespeed,
    physical_flux,
    primitive_from_conserved,
)
from .problems import ProblemSpec, exact_solution, get_problem, initial_condition, list_problems
from .reconstruction import (
    NsFluxConfig,
    ReconstructionWeights,
    eno_interface_value,
    nonoscillatory_flux,
    split_flux_lxf,
    weno_interface_value,
)
from .schemes import FluxSchemeConfig, parse_scheme_name, render_scheme_name

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapabilityError",
    "ConfigurationError",
    "ConvergenceRow",
    "DomainError",
    "EntropyPairValues",
    "EntropyReport",
    "Field",
    "FluxSchemeConfig",
    "Grid",
    "InterfaceRecord",
    "NonPhysicalStateError",
    "NsFluxConfig",
    "ParameterError",
    "ProblemSpec",
    "ReconstructionWeights",
    "SelectorConfig",
    "SystemModel",
    "TimeControl",
    "apply_boundary",
    "compute_dt",
    "conserved_from_primitive",
    "convergence_study",
    "ec2_flux",
    "ec4_flux",
    "ec6_flux",
    "ec_coefficients",
    "eno_interface_value",
    "entropy_dissipation_check",
    "entropy_flux_2p",
    "entropy_flux_q2",
    "entropy_pair",
    "error_norms",
    "esno_flux",
    "exact_solution",
    "get_problem",
    "initial_condition",
    "interface_entropy_flux",
    "list_problems",
    "max_wavespeed",
    "nonoscillatory_flux",
    "observed_order",
    "oscillation_metrics",
    "parse_scheme_name",
    "physical_flux",
    "primitive_from_conserved",
    "render_scheme_name",
    "run",
    "semi_discrete_rhs",
    "sign_match",
    "split_flux_lxf",
    "ssp_rk3_step",
    "step_2d",
    "symmetry_check_2d",
    "weno_interface_value",
]
