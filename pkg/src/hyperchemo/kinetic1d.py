"""Two-velocity discrete-kinetic solver for the coupled cell/chemical system.

The cell population is described by distribution values f+ and f- at the two
velocities +s and -s, the chemical by g+ and g-; velocity integrals are plain
two-term sums.  Moments:

    n = f+ + f-,   q = s*(f+ - f-),   N1 = g+ + g-,   Q1 = s*(g+ - g-).

The right-hand side combines the dominant relaxation with rate mu0/eps_k
toward the local equilibrium (n +- q/s)/2, the chemotactic turning terms with
rates mu1 and mu2 driven by a = alpha1 * dN1/dx, the chemical relaxation with
rate sigma1 toward N1/2 and the chemical source n/2.

One step = exact upwind transport over dt (left-biased stencil for the
rightward family, right-biased for the leftward one), then a cell-local
collision update where the stiff relaxations (mu0/eps_k and sigma1) are
implicit and the turning and source terms explicit, so stability never
degrades as eps_k shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .mesh import Grid1D, MacroState1D, extend_1d
from .model import ModelParams

CFL_SLACK = 1e-12


@dataclass
class KineticState1D:
    """Distribution values at the two velocities, for cells (f) and chemical (g)."""

    f_plus: np.ndarray
    f_minus: np.ndarray
    g_plus: np.ndarray
    g_minus: np.ndarray

    def __post_init__(self) -> None:
        arrays = [np.asarray(a, dtype=float) for a in
                  (self.f_plus, self.f_minus, self.g_plus, self.g_minus)]
        self.f_plus, self.f_minus, self.g_plus, self.g_minus = arrays
        if len({a.shape for a in arrays}) != 1:
            raise ValueError("all kinetic arrays must have the same shape")

    def copy(self) -> "KineticState1D":
        return KineticState1D(self.f_plus.copy(), self.f_minus.copy(),
                              self.g_plus.copy(), self.g_minus.copy())


def equilibrium(n, q, s: float):
    """Local equilibrium pair F+- = (n +- q/s)/2 with moments (n, q)."""
    if not s > 0:
        raise ValueError(f"s must be positive (got {s!r})")
    n = np.asarray(n, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * (n + q / s), 0.5 * (n - q / s)


def moments(kstate: KineticState1D, s: float) -> MacroState1D:
    """Macroscopic moments of the kinetic state."""
    if not s > 0:
        raise ValueError(f"s must be positive (got {s!r})")
    return MacroState1D(
        n=kstate.f_plus + kstate.f_minus,
        q=s * (kstate.f_plus - kstate.f_minus),
        N1=kstate.g_plus + kstate.g_minus,
        Q1=s * (kstate.g_plus - kstate.g_minus),
    )


def from_macro(state: MacroState1D, s: float) -> KineticState1D:
    """Kinetic state at local equilibrium with the given macroscopic moments."""
    f_plus, f_minus = equilibrium(state.n, state.q, s)
    g_plus, g_minus = equilibrium(state.N1, state.Q1, s)
    return KineticState1D(f_plus, f_minus, g_plus, g_minus)


def _chemo_slope(N1: np.ndarray, alpha1: float, grid: Grid1D,
                 flux_rule: str) -> np.ndarray:
    """a = alpha1 * dN1/dx by centered differences with ghost nodes."""
    N1e = extend_1d(N1, flux_rule, odd=False)
    return alpha1 * (N1e[2:] - N1e[:-2]) / (2.0 * grid.dx)


def collision_rhs(kstate: KineticState1D, params: ModelParams, grid: Grid1D,
                  flux_rule: str = "copy"):
    """Collision right-hand sides (rhs_f+, rhs_f-, rhs_g+, rhs_g-) per node.

    rhs(f+-) = (mu0/eps_k)*(F+- - f+-) + mu1*(n/2 - f+-)
               - (mu2/s^2)*(q/2 -+ s*f+-)*a
    rhs(g+-) = sigma1*(N1/2 - g+-) + n/2
    """
    s = params.s
    fp, fm = kstate.f_plus, kstate.f_minus
    gp, gm = kstate.g_plus, kstate.g_minus
    n = fp + fm
    q = s * (fp - fm)
    N1 = gp + gm
    a = _chemo_slope(N1, params.alpha1, grid, flux_rule)

    Fp, Fm = equilibrium(n, q, s)
    relax = params.mu0 / params.eps_k
    mu2_s2 = params.mu2 / (s * s)
    rhs_fp = relax * (Fp - fp) + params.mu1 * (0.5 * n - fp) \
        - mu2_s2 * (0.5 * q - s * fp) * a
    rhs_fm = relax * (Fm - fm) + params.mu1 * (0.5 * n - fm) \
        - mu2_s2 * (0.5 * q + s * fm) * a
    rhs_gp = params.sigma1 * (0.5 * N1 - gp) + 0.5 * n
    rhs_gm = params.sigma1 * (0.5 * N1 - gm) + 0.5 * n
    return rhs_fp, rhs_fm, rhs_gp, rhs_gm


def kinetic_step(kstate: KineticState1D, params: ModelParams, grid: Grid1D,
                 dt: float, flux_rule: str = "copy") -> KineticState1D:
    """One transport + collision step."""
    if not dt > 0:
        raise ValueError(f"dt must be positive (got {dt!r})")
    s, dx = params.s, grid.dx
    nu = s * dt / dx
    if nu > 1.0 + CFL_SLACK:
        raise SolverError(
            f"CFL violation in kinetic transport: s*dt/dx = {nu:.6g} > 1")

    fp, fm = kstate.f_plus, kstate.f_minus
    gp, gm = kstate.g_plus, kstate.g_minus

    # upwind transport; at a reflecting wall the incoming family is the
    # reflected outgoing one, under the copy rule it is the even extension
    if flux_rule == "copy":
        fp_l, fm_r = fp[1], fm[-2]
        gp_l, gm_r = gp[1], gm[-2]
    elif flux_rule == "reflect":
        fp_l, fm_r = fm[0], fp[-1]
        gp_l, gm_r = gm[0], gp[-1]
    else:
        raise ValueError(f"unknown flux rule: {flux_rule!r}")
    fp_t = fp - nu * (fp - np.concatenate(([fp_l], fp[:-1])))
    fm_t = fm - nu * (fm - np.concatenate((fm[1:], [fm_r])))
    gp_t = gp - nu * (gp - np.concatenate(([gp_l], gp[:-1])))
    gm_t = gm - nu * (gm - np.concatenate((gm[1:], [gm_r])))

    # collision: moments first (the implicit relaxation conserves them), then
    # the implicit relaxation formula per velocity
    n_t = fp_t + fm_t
    q_t = s * (fp_t - fm_t)
    N1_t = gp_t + gm_t
    a = _chemo_slope(N1_t, params.alpha1, grid, flux_rule)

    q_new = q_t + dt * (-params.mu1 * q_t + params.mu2 * n_t * a)
    Fp_new, Fm_new = equilibrium(n_t, q_new, s)
    relax = dt * params.mu0 / params.eps_k
    mu2_s2 = params.mu2 / (s * s)
    L1p = params.mu1 * (0.5 * n_t - fp_t) - mu2_s2 * (0.5 * q_t - s * fp_t) * a
    L1m = params.mu1 * (0.5 * n_t - fm_t) - mu2_s2 * (0.5 * q_t + s * fm_t) * a
    fp_new = (fp_t + relax * Fp_new + dt * L1p) / (1.0 + relax)
    fm_new = (fm_t + relax * Fm_new + dt * L1m) / (1.0 + relax)

    N1_new = N1_t + dt * n_t
    diff_new = (gp_t - gm_t) / (1.0 + dt * params.sigma1)
    gp_new = 0.5 * (N1_new + diff_new)
    gm_new = 0.5 * (N1_new - diff_new)

    out = KineticState1D(fp_new, fm_new, gp_new, gm_new)
    if not all(np.isfinite(a_).all() for a_ in
               (out.f_plus, out.f_minus, out.g_plus, out.g_minus)):
        raise SolverError("non-finite state after kinetic step")
    return out


def default_dt(params: ModelParams, grid: Grid1D, cfl: float = 0.9) -> float:
    """Transport-limited step dt = cfl * dx / s."""
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must be in (0, 1] (got {cfl!r})")
    return cfl * grid.dx / params.s
