"""Pseudospectral simulation of the focusing nonlinear Schrodinger
equation and its Schrodinger-Helmholtz / Schrodinger-Newton
regularizations on a periodic box."""

from .diagnostics import (BlowupPolicy, DiagnosticsRecord, blowup_check,
                          hamiltonian, mass, tail_fraction)
from .groundstate import RadialProfile, deposit, shoot, solve_ground_state
from .harness import (RunConfig, SweepConfig, alpha_sweep, build_initial,
                      execute, load_run_config, load_sweep_config)
from .spectral import (Grid, NonFiniteFieldError, free_propagator,
                       from_spectral, gradient_sq_integral, helmholtz_inverse,
                       poisson_inverse_zero_mean, to_spectral)
from .stepper import RunResult, StepControl, adapt_dt, run, strang_step
from .system import EquationSpec, RegimeReport, nonlinearity, potential, validate_regime

__version__ = "0.1.0"

__all__ = [
    "BlowupPolicy", "DiagnosticsRecord", "EquationSpec", "Grid",
    "NonFiniteFieldError", "RadialProfile", "RegimeReport", "RunConfig",
    "RunResult", "StepControl", "SweepConfig", "adapt_dt", "alpha_sweep",
    "blowup_check", "build_initial", "deposit", "execute", "free_propagator",
    "from_spectral", "gradient_sq_integral", "hamiltonian",
    "helmholtz_inverse", "load_run_config", "load_sweep_config", "mass",
    "nonlinearity", "poisson_inverse_zero_mean", "potential", "run", "shoot",
    "solve_ground_state", "strang_step", "tail_fraction", "to_spectral",
    "validate_regime",
]
