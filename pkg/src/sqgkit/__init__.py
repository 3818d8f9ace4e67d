"""sqgkit — spectral toolkit for the dissipative surface quasi-geostrophic equation.

The equation, posed on the 2π-periodic torus with κ > 0 and 0 ≤ α < 1:

    ∂θ/∂t + u·∇θ + κ (-Δ)^α θ = 0,      u = (∂y, -∂x) (-Δ)^(-1/2) θ.

The package provides the spectral operators (:mod:`sqgkit.spectral`), two
families of closed-form quasi-stationary solutions with analytic velocity and
time derivative (:mod:`sqgkit.solutions`), an integrating-factor RK4
pseudo-spectral solver (:mod:`sqgkit.integrator`), quantitative verification
of every claimed property (:mod:`sqgkit.verify`), and a file-driven scenario
runner with CSV/PPM artifacts (:mod:`sqgkit.fileio`, :mod:`sqgkit.scenario`,
``sqg`` on the command line).
"""

from . import errors
from .errors import (BlowupDetected, ConfigError, ConstraintViolation, DegenerateFit,
                     DomainError, FormatError, InvalidSolution, ParseError, SqgError,
                     StabilityWarning, SymmetryViolation, UnderResolved, UnknownKey,
                     ZeroField)
from .fileio import (ScenarioConfig, parse_config, read_field_csv, render_contour,
                     write_field_csv)
from .integrator import SolverParams, Snapshot, Trajectory, simulate, step
from .scenario import ScenarioResult, builtin_scenarios, run_builtin, run_scenario
from .solutions import (BuiltinSample, EigenmodeSolution, UnidirectionalSolution,
                        ValidationReport, builtin_samples, eval_dtheta_dt, eval_theta,
                        eval_velocity, validate)
from .spectral import (GridSpec, PhysicalField, SpectralField, forward_transform,
                       fractional_laplacian, inv_sqrt_laplacian, inverse_transform,
                       nonlinear_term, velocity_from_theta)
from .verify import (DecayFit, ResidualReport, decay_rate_fit, pattern_correlation,
                     residual, solver_vs_exact, unidirectionality_check)

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "PhysicalField", "SpectralField",
    "forward_transform", "inverse_transform", "fractional_laplacian",
    "inv_sqrt_laplacian", "velocity_from_theta", "nonlinear_term",
    "EigenmodeSolution", "UnidirectionalSolution", "ValidationReport",
    "BuiltinSample", "validate", "eval_theta", "eval_velocity", "eval_dtheta_dt",
    "builtin_samples",
    "SolverParams", "Snapshot", "Trajectory", "step", "simulate",
    "ResidualReport", "DecayFit", "residual", "decay_rate_fit",
    "pattern_correlation", "unidirectionality_check", "solver_vs_exact",
    "ScenarioConfig", "parse_config", "write_field_csv", "read_field_csv",
    "render_contour", "ScenarioResult", "run_scenario", "run_builtin",
    "builtin_scenarios",
    "errors", "SqgError", "DomainError", "SymmetryViolation", "InvalidSolution",
    "BlowupDetected", "UnderResolved", "DegenerateFit", "ZeroField", "FormatError",
    "ConfigError", "ParseError", "UnknownKey", "ConstraintViolation",
    "StabilityWarning",
    "__version__",
]
