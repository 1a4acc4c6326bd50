"""Solvers for a hyperbolic chemotaxis system and its Keller-Segel limit."""

from .config import PRESETS, RunConfig, parse_config, render_config
from .errors import ConfigError, SolverError
from .kinetic1d import KineticState1D, collision_rhs, equilibrium, kinetic_step, moments
from .ks1d import KSState1D, ks_step, sg_flux
from .lf2d import (Wavespeeds, cfl_dt, lf_conservative_step, lf_step,
                   max_wavespeeds, physical_fluxes, source_step)
from .mesh import (Grid1D, Grid2D, MacroState1D, MacroState2D, gaussian_ic_1d,
                   gaussian_ic_2d, ghost_values_1d, total_mass)
from .model import ModelParams, derive_coefficients
from .runner import convergence_study, run_simulation
from .wb1d import (DiagonalState1D, chemical_solve, from_diagonal,
                   interface_flux_F, interface_flux_f, to_diagonal, wb_step)

__all__ = [
    "PRESETS", "RunConfig", "parse_config", "render_config",
    "ConfigError", "SolverError",
    "KineticState1D", "collision_rhs", "equilibrium", "kinetic_step", "moments",
    "KSState1D", "ks_step", "sg_flux",
    "Wavespeeds", "cfl_dt", "lf_conservative_step", "lf_step",
    "max_wavespeeds", "physical_fluxes", "source_step",
    "Grid1D", "Grid2D", "MacroState1D", "MacroState2D",
    "gaussian_ic_1d", "gaussian_ic_2d", "ghost_values_1d", "total_mass",
    "ModelParams", "derive_coefficients",
    "convergence_study", "run_simulation",
    "DiagonalState1D", "chemical_solve", "from_diagonal",
    "interface_flux_F", "interface_flux_f", "to_diagonal", "wb_step",
]
