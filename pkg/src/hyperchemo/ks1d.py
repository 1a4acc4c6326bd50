"""Keller-Segel limit scheme: explicit exponentially fitted density update and
implicit second-order diffusion for the chemical.

This is the reference scheme the well-balanced solver approaches for small
eps.  The density flux at interface i+1/2 is the Scharfetter-Gummel flux for
the local constant-coefficient drift-diffusion problem between nodes i and
i+1; the chemical S is advanced by backward-Euler centered diffusion with the
freshly updated density as source.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SolverError
from .mesh import Grid1D, extend_1d
from .model import ModelParams

# below this |beta| the exponential fitting is evaluated as its diffusive limit
SMALL_BETA = 1e-8

TRIDIAG_RESIDUAL_TOL = 1e-10


@dataclass
class KSState1D:
    """Node values of the density n and the chemical concentration S."""

    n: np.ndarray
    S: np.ndarray

    def __post_init__(self) -> None:
        self.n = np.asarray(self.n, dtype=float)
        self.S = np.asarray(self.S, dtype=float)
        if self.n.shape != self.S.shape:
            raise ValueError("n and S must have the same shape")

    def copy(self) -> "KSState1D":
        return KSState1D(self.n.copy(), self.S.copy())


def sg_flux(n_i, n_ip1, S_i, S_ip1, alpha1: float, D_n: float, dx: float):
    """Scharfetter-Gummel flux at the interface between nodes i and i+1.

    With sigma = (S_ip1 - S_i)/dx and beta = alpha1*dx*sigma/D_n:

        J = alpha1*sigma*(n_i - e^{-beta} n_ip1) / (1 - e^{-beta}),

    returning the diffusive limit (D_n/dx)*(n_i - n_ip1) for |beta| < 1e-8 and
    the e^{beta}-rearranged form for beta < 0 to avoid overflow.
    """
    for name, val in (("D_n", D_n), ("dx", dx)):
        if not val > 0:
            raise ValueError(f"{name} must be positive (got {val!r})")
    scalar = (np.ndim(n_i) == 0 and np.ndim(n_ip1) == 0
              and np.ndim(S_i) == 0 and np.ndim(S_ip1) == 0)
    n1, n2, S1, S2 = np.atleast_1d(*np.broadcast_arrays(
        np.asarray(n_i, dtype=float), np.asarray(n_ip1, dtype=float),
        np.asarray(S_i, dtype=float), np.asarray(S_ip1, dtype=float)))
    if not all(np.isfinite(arr).all() for arr in (n1, n2, S1, S2)):
        raise ValueError("non-finite input to sg_flux")

    sigma = (S2 - S1) / dx
    beta = alpha1 * dx * sigma / D_n
    out = np.empty(n1.shape)

    small = np.abs(beta) < SMALL_BETA
    if small.any():
        out[small] = (D_n / dx) * (n1[small] - n2[small])
    pos = beta >= SMALL_BETA
    if pos.any():
        E = np.exp(-beta[pos])
        out[pos] = alpha1 * sigma[pos] * (n1[pos] - E * n2[pos]) / (1.0 - E)
    neg = beta <= -SMALL_BETA
    if neg.any():
        E = np.exp(beta[neg])
        out[neg] = alpha1 * sigma[neg] * (E * n1[neg] - n2[neg]) / (E - 1.0)
    return float(out[0]) if scalar else out


def ks_step(state: KSState1D, params: ModelParams, grid: Grid1D, dt: float,
            flux_rule: str = "copy") -> KSState1D:
    """One step: conservative density update, then implicit chemical diffusion.

    n_i^{k+1} = n_i^k - (dt/dx)*(J_{i+1/2} - J_{i-1/2}) with J from sg_flux;
    then (1/dt)*(S^{k+1} - S^k) = D_S * centered_laplacian(S^{k+1}) + n^{k+1},
    both with the ghost rule folded into the assembly.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive (got {dt!r})")
    dx, Nx = grid.dx, grid.Nx

    ne = extend_1d(state.n, flux_rule, odd=False)
    Se = extend_1d(state.S, flux_rule, odd=False)
    J = sg_flux(ne[:-1], ne[1:], Se[:-1], Se[1:], params.alpha1, params.D_n, dx)
    n_new = state.n - (dt / dx) * (J[1:] - J[:-1])

    # implicit diffusion for S, tridiagonal with ghost substitution
    beta = dt * params.D_N1 / dx**2
    m = Nx + 1
    ab = np.zeros((3, m))
    ab[1, :] = 1.0 + 2.0 * beta
    ab[0, 1:] = -beta
    ab[2, :-1] = -beta
    if flux_rule == "copy":
        ab[0, 1] = -2.0 * beta       # row 0: S_{-1} := S_1
        ab[2, m - 2] = -2.0 * beta   # row Nx: S_{Nx+1} := S_{Nx-1}
    elif flux_rule == "reflect":
        ab[1, 0] = 1.0 + beta        # row 0: S_{-1} := S_0
        ab[1, m - 1] = 1.0 + beta    # row Nx: S_{Nx+1} := S_Nx
    else:
        raise ValueError(f"unknown flux rule: {flux_rule!r}")
    rhs = state.S + dt * n_new

    try:
        S_new = scipy.linalg.solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"singular chemical diffusion system: beta={beta:.6g}, dt={dt:.6g}") from exc

    # residual of the assembled equations
    if flux_rule == "copy":
        Sg = np.concatenate(([S_new[1]], S_new, [S_new[-2]]))
    else:
        Sg = np.concatenate(([S_new[0]], S_new, [S_new[-1]]))
    res = (1.0 + 2.0 * beta) * S_new - beta * (Sg[:-2] + Sg[2:]) - rhs
    resmax = float(np.max(np.abs(res)))
    if not np.isfinite(resmax) or resmax > TRIDIAG_RESIDUAL_TOL:
        raise SolverError(
            f"chemical diffusion residual {resmax:.3e} exceeds "
            f"{TRIDIAG_RESIDUAL_TOL:g} (beta={beta:.6g})")

    if not (np.isfinite(n_new).all() and np.isfinite(S_new).all()):
        raise SolverError("non-finite state after Keller-Segel step")
    return KSState1D(n_new, S_new)


def default_dt(params: ModelParams, grid: Grid1D, safety: float = 0.45) -> float:
    """Parabolic restriction for the explicit density update; shares the
    well-balanced solver's clock when D_n >= D_N1 so comparisons can reuse dt."""
    return safety * grid.dx**2 / (2.0 * params.D_n)
