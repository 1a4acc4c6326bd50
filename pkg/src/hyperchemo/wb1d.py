"""Well-balanced semi-implicit scheme for the 1D scaled chemotaxis system.

The macroscopic unknowns (n, q = n*u, N1, Q1 = N1*U1) are advanced in the
diagonal variables

    v = (n + eps*q)/2,   w = (n - eps*q)/2,
    V = (N1 + eps*Q1)/2, W = (N1 - eps*Q1)/2,

which split the transport part into two counter-propagating families.  With
lam = dt/(eps*dx) one step does:

1. interface slopes a_{i-1/2} = (alpha1/D_n)*(N1_i - N1_{i-1})/dx and
   exponentially fitted interface fluxes f_{i-1/2} from time-k data;
2. per-node 2x2 solve for (v, w), equivalent to the closed form
       n^{k+1} = n^k + lam*(f_{i-1/2} - f_{i+1/2}),
       (1 + 2*lam)*(v - w)^{k+1} = (v - w)^k + lam*(f_{i-1/2} + f_{i+1/2});
3. the chemical pair (V, W), whose interface fluxes are taken at the new time,
   is solved as one banded linear system (interleaved unknowns, bandwidth 2)
   with density source (dt/2)*n^{k+1} in each half;
4. ghost nodes follow the selected flux rule.

The fluxes are built so that f/eps tends to the Scharfetter-Gummel flux and
F/eps to the centered diffusive flux as eps -> 0, which makes the scheme a
uniformly stable companion of the Keller-Segel discretization in ks1d.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SolverError
from .mesh import Grid1D, MacroState1D, extend_1d
from .model import ModelParams

# below this |a*dx| the generic flux expression is evaluated as its 0/0 limit
SMALL_ADX = 1e-8

# max-norm residual allowed for the implicit chemical solve
CHEMICAL_RESIDUAL_TOL = 1e-10


@dataclass
class DiagonalState1D:
    """Diagonal (Riemann) representation of a MacroState1D at a given eps."""

    v: np.ndarray
    w: np.ndarray
    V: np.ndarray
    W: np.ndarray


@dataclass
class WBWorkspace:
    """Per-step scratch: interface slopes/fluxes and the banded chemical system."""

    a: np.ndarray       # interface slopes a_{i-1/2}, i = 0..Nx+1
    f: np.ndarray       # interface fluxes f_{i-1/2}, i = 0..Nx+1
    ab: np.ndarray      # banded matrix, shape (5, 2*(Nx+1))
    rhs: np.ndarray

    @classmethod
    def for_grid(cls, grid: Grid1D) -> "WBWorkspace":
        m = 2 * (grid.Nx + 1)
        return cls(a=np.empty(grid.Nx + 2), f=np.empty(grid.Nx + 2),
                   ab=np.empty((5, m)), rhs=np.empty(m))


def to_diagonal(state: MacroState1D, eps: float) -> DiagonalState1D:
    """Map (n, q, N1, Q1) to (v, w, V, W)."""
    if not eps > 0:
        raise ValueError(f"eps must be positive (got {eps!r})")
    return DiagonalState1D(
        v=0.5 * (state.n + eps * state.q),
        w=0.5 * (state.n - eps * state.q),
        V=0.5 * (state.N1 + eps * state.Q1),
        W=0.5 * (state.N1 - eps * state.Q1),
    )


def from_diagonal(diag: DiagonalState1D, eps: float) -> MacroState1D:
    """Inverse of to_diagonal: n = v + w, q = (v - w)/eps, same for the chemical."""
    if not eps > 0:
        raise ValueError(f"eps must be positive (got {eps!r})")
    return MacroState1D(
        n=diag.v + diag.w,
        q=(diag.v - diag.w) / eps,
        N1=diag.V + diag.W,
        Q1=(diag.V - diag.W) / eps,
    )


def interface_flux_f(v_left, w_right, a, eps: float, D_n: float, dx: float):
    """Exponentially fitted interface flux for the cell-density pair.

    Evaluates

        f = 2*eps*a*D_n*(v_left - e^{-a dx} w_right)
            / (eps*a*(1 + e^{-a dx}) - (e^{-a dx} - 1))

    with two guards: for |a*dx| < 1e-8 the expression is 0/0 and the analytic
    limit 2*eps*D_n*(v_left - w_right)/(2*eps + dx) is returned; for a*dx < 0
    numerator and denominator are multiplied by e^{a dx} so the exponential
    never overflows.  Accepts scalars or broadcastable arrays.
    """
    for name, val in (("eps", eps), ("D_n", D_n), ("dx", dx)):
        if not val > 0:
            raise ValueError(f"{name} must be positive (got {val!r})")
    scalar = np.ndim(v_left) == 0 and np.ndim(w_right) == 0 and np.ndim(a) == 0
    v, w, a = np.atleast_1d(*np.broadcast_arrays(
        np.asarray(v_left, dtype=float),
        np.asarray(w_right, dtype=float),
        np.asarray(a, dtype=float)))
    if not (np.isfinite(v).all() and np.isfinite(w).all() and np.isfinite(a).all()):
        raise ValueError("non-finite input to interface_flux_f")

    adx = a * dx
    out = np.empty(v.shape)

    small = np.abs(adx) < SMALL_ADX
    if small.any():
        out[small] = 2.0 * eps * D_n * (v[small] - w[small]) / (2.0 * eps + dx)
    pos = adx >= SMALL_ADX
    if pos.any():
        E = np.exp(-adx[pos])
        ap = a[pos]
        out[pos] = (2.0 * eps * ap * D_n * (v[pos] - E * w[pos])
                    / (eps * ap * (1.0 + E) - (E - 1.0)))
    neg = adx <= -SMALL_ADX
    if neg.any():
        E = np.exp(adx[neg])
        an = a[neg]
        out[neg] = (2.0 * eps * an * D_n * (E * v[neg] - w[neg])
                    / (eps * an * (E + 1.0) - (1.0 - E)))
    return float(out[0]) if scalar else out


def interface_flux_F(V_left, W_right, eps: float, D_N1: float, dx: float):
    """Chemical interface flux 2*eps*D_N1/(2*eps*D_N1 + dx) * (V_left - W_right)."""
    for name, val in (("eps", eps), ("D_N1", D_N1), ("dx", dx)):
        if not val > 0:
            raise ValueError(f"{name} must be positive (got {val!r})")
    coef = 2.0 * eps * D_N1 / (2.0 * eps * D_N1 + dx)
    return coef * (np.asarray(V_left, dtype=float) - np.asarray(W_right, dtype=float))


def _chemical_ghosts(V: np.ndarray, W: np.ndarray, flux_rule: str):
    """Ghost unknowns (V_{-1}, W_{Nx+1}) expressed through interior unknowns."""
    if flux_rule == "copy":
        return V[1], W[-2]
    if flux_rule == "reflect":
        return W[0], V[-1]
    raise ValueError(f"unknown flux rule: {flux_rule!r}")


def chemical_solve(diag_k: DiagonalState1D, n_new: np.ndarray, params: ModelParams,
                   grid: Grid1D, dt: float, flux_rule: str = "copy",
                   workspace: WBWorkspace | None = None):
    """Advance the chemical diagonal pair (V, W) one implicit step.

    Solves, for i = 0..Nx with lam = dt/(eps*dx) and flux
    F_{i-1/2} = coef*(V_{i-1} - W_i) at the new time:

        (1+lam)*V_i - lam*W_i - lam*F_{i-1/2} = V_i^k + (dt/2)*n_new_i
        (1+lam)*W_i - lam*V_i + lam*F_{i+1/2} = W_i^k + (dt/2)*n_new_i

    Ghost unknowns are eliminated by substitution (copy: V_{-1} := V_1,
    W_{Nx+1} := W_{Nx-1}; reflect: V_{-1} := W_0, W_{Nx+1} := V_Nx), which
    keeps the system banded with bandwidth 2 in the interleaved ordering
    (V_0, W_0, V_1, W_1, ...).  The solution is verified to satisfy the
    assembled equations to 1e-10 in max norm.
    """
    eps, dx, Nx = params.eps, grid.dx, grid.Nx
    lam = dt / (eps * dx)
    coef = 2.0 * eps * params.D_N1 / (2.0 * eps * params.D_N1 + dx)
    m = 2 * (Nx + 1)
    if workspace is None:
        workspace = WBWorkspace.for_grid(grid)
    ab, rhs = workspace.ab, workspace.rhs

    # constant diagonals of the interleaved system (rows 2i: V_i equation,
    # rows 2i+1: W_i equation)
    ab[:] = 0.0
    ab[2, :] = 1.0 + lam                 # V_i / W_i on their own rows
    ab[1, 1::2] = lam * (coef - 1.0)     # V_i eq: W_i column
    ab[3, 0::2] = lam * (coef - 1.0)     # W_i eq: V_i column
    ab[0, 3::2] = -lam * coef            # W_i eq: W_{i+1} column
    ab[4, 0:m - 2:2] = -lam * coef       # V_{i+1} eq: V_i column

    if flux_rule == "copy":
        ab[0, 2] += -lam * coef          # V_0 eq: V_{-1} := V_1
        ab[4, m - 3] += -lam * coef      # W_Nx eq: W_{Nx+1} := W_{Nx-1}
    elif flux_rule == "reflect":
        ab[1, 1] += -lam * coef          # V_0 eq: V_{-1} := W_0
        ab[3, m - 2] += -lam * coef      # W_Nx eq: W_{Nx+1} := V_Nx
    else:
        raise ValueError(f"unknown flux rule: {flux_rule!r}")

    src = 0.5 * dt * np.asarray(n_new, dtype=float)
    rhs[0::2] = diag_k.V + src
    rhs[1::2] = diag_k.W + src

    try:
        sol = scipy.linalg.solve_banded((2, 2), ab, rhs,
                                        overwrite_ab=False, overwrite_b=False)
    except np.linalg.LinAlgError as exc:
        raise SolverError(
            f"singular chemical system: lam={lam:.6g}, flux coef={coef:.6g}, "
            f"dt={dt:.6g}, dx={dx:.6g}") from exc

    V_new = sol[0::2].copy()
    W_new = sol[1::2].copy()

    # verify the postcondition against the equations themselves
    gl, gr = _chemical_ghosts(V_new, W_new, flux_rule)
    Vm1 = np.concatenate(([gl], V_new[:-1]))
    Wp1 = np.concatenate((W_new[1:], [gr]))
    F_minus = coef * (Vm1 - W_new)
    F_plus = coef * (V_new - Wp1)
    resV = (1.0 + lam) * V_new - lam * W_new - lam * F_minus - rhs[0::2]
    resW = (1.0 + lam) * W_new - lam * V_new + lam * F_plus - rhs[1::2]
    res = max(np.max(np.abs(resV)), np.max(np.abs(resW)))
    if not np.isfinite(res) or res > CHEMICAL_RESIDUAL_TOL:
        raise SolverError(
            f"chemical solve residual {res:.3e} exceeds {CHEMICAL_RESIDUAL_TOL:g} "
            f"(lam={lam:.6g}, flux coef={coef:.6g})")
    return V_new, W_new


def wb_interface_fluxes(state: MacroState1D, params: ModelParams, grid: Grid1D,
                        flux_rule: str = "copy"):
    """Slopes a_{i-1/2} and fluxes f_{i-1/2} for i = 0..Nx+1 from time-k data."""
    eps, dx = params.eps, grid.dx
    dg = to_diagonal(state, eps)
    N1e = extend_1d(state.N1, flux_rule, odd=False)
    a = (params.alpha1 / params.D_n) * np.diff(N1e) / dx
    if flux_rule == "copy":
        v_left = np.concatenate(([dg.v[1]], dg.v))
        w_right = np.concatenate((dg.w, [dg.w[-2]]))
    elif flux_rule == "reflect":
        # incoming characteristic at a wall is the reflected outgoing one
        v_left = np.concatenate(([dg.w[0]], dg.v))
        w_right = np.concatenate((dg.w, [dg.v[-1]]))
    else:
        raise ValueError(f"unknown flux rule: {flux_rule!r}")
    f = interface_flux_f(v_left, w_right, a, eps, params.D_n, dx)
    return a, f


def wb_step(state: MacroState1D, params: ModelParams, grid: Grid1D, dt: float,
            flux_rule: str = "copy", workspace: WBWorkspace | None = None) -> MacroState1D:
    """One full step of the well-balanced scheme."""
    if not dt > 0:
        raise ValueError(f"dt must be positive (got {dt!r})")
    eps = params.eps
    lam = dt / (eps * grid.dx)

    dg = to_diagonal(state, eps)
    _, f = wb_interface_fluxes(state, params, grid, flux_rule)

    n_new = state.n + lam * (f[:-1] - f[1:])
    diff_new = ((dg.v - dg.w) + lam * (f[:-1] + f[1:])) / (1.0 + 2.0 * lam)
    v_new = 0.5 * (n_new + diff_new)
    w_new = 0.5 * (n_new - diff_new)

    V_new, W_new = chemical_solve(dg, n_new, params, grid, dt, flux_rule, workspace)

    out = from_diagonal(DiagonalState1D(v_new, w_new, V_new, W_new), eps)
    if not (np.isfinite(out.n).all() and np.isfinite(out.q).all()
            and np.isfinite(out.N1).all() and np.isfinite(out.Q1).all()):
        raise SolverError("non-finite state after well-balanced step")
    return out


def default_dt(params: ModelParams, grid: Grid1D, safety: float = 0.45) -> float:
    """Parabolic-type step restriction, independent of eps.

    The stiff relaxation parts are implicit; what remains explicit behaves like
    diffusion with coefficient max(D_n, D_N1_eff).
    """
    D_eff = max(params.D_N1, params.D_n)
    return safety * grid.dx**2 / (2.0 * max(params.D_n, D_eff))
