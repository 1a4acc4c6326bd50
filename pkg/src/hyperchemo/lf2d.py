"""Two-dimensional Lax-Friedrichs splitting scheme.

Each step splits the six-component system U = (n, q1, q2, N1, Q1x, Q1y) into a
conservative transport part, advanced with Lax-Friedrichs interface fluxes,
and a relaxation/source part, advanced implicitly but resolved cell-locally in
closed form (n is untouched by the source, N1 needs only n, the flux
components then divide by their relaxation factors).

Boundary ghosts: the reflect rule mirrors the wall node and negates the
normal flux components, which makes the normal Lax-Friedrichs mass flux vanish
identically at the walls; the copy rule applies the even-copy pattern to all
components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .mesh import Grid2D, MacroState2D
from .model import ModelParams

# component order in the stacked representation
FIELDS = ("n", "q1", "q2", "N1", "Q1x", "Q1y")
_X_ODD = np.array([False, True, False, False, True, False])  # normal to x-walls
_Y_ODD = np.array([False, False, True, False, False, True])  # normal to y-walls

CFL_SLACK = 1e-12


@dataclass(frozen=True)
class Wavespeeds:
    """Maximal characteristic speeds of the two flux Jacobians."""

    alpha_x: float
    alpha_y: float


def state_array(state: MacroState2D) -> np.ndarray:
    """Stack the six fields into shape (6, Nx+1, Ny+1)."""
    return np.stack([state.n, state.q1, state.q2,
                     state.N1, state.Q1x, state.Q1y])


def state_from_array(U: np.ndarray) -> MacroState2D:
    return MacroState2D(*(U[k] for k in range(6)))


def physical_fluxes(U: np.ndarray, s: float):
    """Flux vectors F1 (x-direction) and F2 (y-direction) of the system.

    F1 = (q1, s^2 n/2, 0, Q1x, s^2 N1/2, 0),
    F2 = (q2, 0, s^2 n/2, Q1y, 0, s^2 N1/2).
    U may be a single 6-vector or a stacked field (6, ...).
    """
    if not s > 0:
        raise ValueError(f"s must be positive (got {s!r})")
    U = np.asarray(U, dtype=float)
    half_s2 = 0.5 * s * s
    zero = np.zeros_like(U[0])
    F1 = np.stack([U[1], half_s2 * U[0], zero,
                   U[4], half_s2 * U[3], zero.copy()])
    F2 = np.stack([U[2], zero.copy(), half_s2 * U[0],
                   U[5], zero.copy(), half_s2 * U[3]])
    return F1, F2


def max_wavespeeds(params: ModelParams) -> Wavespeeds:
    """Largest |eigenvalue| of the flux Jacobians: s/sqrt(2) in both directions.

    Each Jacobian consists of two 2x2 blocks [[0, 1], [s^2/2, 0]] (for the
    (n, q) and (N1, Q1) pairs) plus zero rows, so the spectrum is
    {0, 0, +-s/sqrt(2)} duplicated.
    """
    if params.d != 2:
        raise ValueError(f"wavespeeds are defined for d=2 parameter sets (got d={params.d})")
    alpha = params.s / np.sqrt(2.0)
    return Wavespeeds(alpha_x=alpha, alpha_y=alpha)


def cfl_dt(params: ModelParams, grid: Grid2D, cfl: float) -> float:
    """Time step dt = cfl / (alpha_x/dx + alpha_y/dy)."""
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must be in (0, 1] (got {cfl!r})")
    ws = max_wavespeeds(params)
    return cfl / (ws.alpha_x / grid.dx + ws.alpha_y / grid.dy)


def pad_field(F: np.ndarray, flux_rule: str, x_odd: bool = False,
              y_odd: bool = False) -> np.ndarray:
    """One ghost layer per side of a (Nx+1, Ny+1) field, per the flux rule."""
    if flux_rule == "copy":
        left, right = F[1:2, :], F[-2:-1, :]
    elif flux_rule == "reflect":
        sx = -1.0 if x_odd else 1.0
        left, right = sx * F[0:1, :], sx * F[-1:, :]
    else:
        raise ValueError(f"unknown flux rule: {flux_rule!r}")
    Fx = np.concatenate([left, F, right], axis=0)
    if flux_rule == "copy":
        bottom, top = Fx[:, 1:2], Fx[:, -2:-1]
    else:
        sy = -1.0 if y_odd else 1.0
        bottom, top = sy * Fx[:, 0:1], sy * Fx[:, -1:]
    return np.concatenate([bottom, Fx, top], axis=1)


def pad_state(U: np.ndarray, flux_rule: str) -> np.ndarray:
    """Ghost-extended stacked state, shape (6, Nx+3, Ny+3)."""
    return np.stack([pad_field(U[k], flux_rule, _X_ODD[k], _Y_ODD[k])
                     for k in range(6)])


def lf_conservative_step(state: MacroState2D, params: ModelParams, grid: Grid2D,
                         dt: float, flux_rule: str = "reflect") -> MacroState2D:
    """Conservative transport substep with Lax-Friedrichs interface fluxes."""
    ws = max_wavespeeds(params)
    cfl = dt * (ws.alpha_x / grid.dx + ws.alpha_y / grid.dy)
    if cfl > 1.0 + CFL_SLACK:
        raise SolverError(
            f"CFL violation in transport substep: dt={dt:.6g} gives "
            f"{cfl:.6g} > 1 (alpha={ws.alpha_x:.6g}, dx={grid.dx:.6g}, dy={grid.dy:.6g})")

    U = state_array(state)
    Up = pad_state(U, flux_rule)
    F1p, F2p = physical_fluxes(Up, params.s)

    # interface fluxes: x-interfaces (i-1/2, j) for i = 0..Nx+1, all interior j
    Fx = (0.5 * (F1p[:, :-1, 1:-1] + F1p[:, 1:, 1:-1])
          - 0.5 * ws.alpha_x * (Up[:, 1:, 1:-1] - Up[:, :-1, 1:-1]))
    Fy = (0.5 * (F2p[:, 1:-1, :-1] + F2p[:, 1:-1, 1:])
          - 0.5 * ws.alpha_y * (Up[:, 1:-1, 1:] - Up[:, 1:-1, :-1]))

    U_new = (U - (dt / grid.dx) * (Fx[:, 1:, :] - Fx[:, :-1, :])
             - (dt / grid.dy) * (Fy[:, :, 1:] - Fy[:, :, :-1]))
    return state_from_array(U_new)


def source_step(state: MacroState2D, params: ModelParams, grid: Grid2D,
                dt: float, flux_rule: str = "reflect") -> MacroState2D:
    """Implicit relaxation/source substep, resolved cell-locally in closed form.

    Dependency order: n is unchanged, N1 = N1* + dt*n, the chemical gradient is
    the centered difference of the new N1, then the flux components divide by
    their relaxation factors (1 + dt*mu1) and (1 + dt*sigma1).
    """
    n_new = state.n
    N1_new = state.N1 + dt * n_new

    N1p = pad_field(N1_new, flux_rule)
    dN1dx = (N1p[2:, 1:-1] - N1p[:-2, 1:-1]) / (2.0 * grid.dx)
    dN1dy = (N1p[1:-1, 2:] - N1p[1:-1, :-2]) / (2.0 * grid.dy)

    drive = dt * params.mu2 * params.alpha1 * n_new
    q1_new = (state.q1 + drive * dN1dx) / (1.0 + dt * params.mu1)
    q2_new = (state.q2 + drive * dN1dy) / (1.0 + dt * params.mu1)
    Q1x_new = state.Q1x / (1.0 + dt * params.sigma1)
    Q1y_new = state.Q1y / (1.0 + dt * params.sigma1)

    return MacroState2D(n_new.copy(), q1_new, q2_new, N1_new, Q1x_new, Q1y_new)


def lf_step(state: MacroState2D, params: ModelParams, grid: Grid2D, dt: float,
            flux_rule: str = "reflect") -> MacroState2D:
    """Full step: conservative transport, then implicit relaxation/source."""
    half = lf_conservative_step(state, params, grid, dt, flux_rule)
    out = source_step(half, params, grid, dt, flux_rule)
    if not all(np.isfinite(a).all() for a in
               (out.n, out.q1, out.q2, out.N1, out.Q1x, out.Q1y)):
        raise SolverError("non-finite state after Lax-Friedrichs step")
    return out
