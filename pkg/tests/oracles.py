"""Independent oracles the tests check the solvers against.

Everything here is written directly from the update equations with plain
loops and dense linear algebra (or high-precision arithmetic), on purpose not
sharing code with the package internals.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def flux_f_highprec(v_left: float, w_right: float, a: float, eps: float,
                    D_n: float, dx: float) -> float:
    """Cell-pair interface flux evaluated from the generic expression in
    50-digit arithmetic (exact limit form when a == 0)."""
    v, w, a_, e_, D, h = (mp.mpf(float(t)) for t in (v_left, w_right, a, eps, D_n, dx))
    if a_ == 0:
        return float(2 * e_ * D * (v - w) / (2 * e_ + h))
    E = mp.e ** (-a_ * h)
    return float(2 * e_ * a_ * D * (v - E * w) / (e_ * a_ * (1 + E) - (E - 1)))


def sg_flux_highprec(n_i: float, n_ip1: float, S_i: float, S_ip1: float,
                     alpha1: float, D_n: float, dx: float) -> float:
    """Scharfetter-Gummel interface flux in 50-digit arithmetic."""
    n1, n2, S1, S2, al, D, h = (mp.mpf(float(t)) for t in
                                (n_i, n_ip1, S_i, S_ip1, alpha1, D_n, dx))
    sig = (S2 - S1) / h
    beta = al * h * sig / D
    if beta == 0:
        return float(D / h * (n1 - n2))
    E = mp.e ** (-beta)
    return float(al * sig * (n1 - E * n2) / (1 - E))


def _ghosts_1d(arr, rule: str, odd: bool = False):
    """(left, right) ghost values for a 1D nodal field."""
    if rule == "copy":
        return arr[1], arr[-2]
    sign = -1.0 if odd else 1.0
    return sign * arr[0], sign * arr[-1]


def dense_chemical_solve(diag, n_new, params, grid, dt: float, rule: str):
    """Assemble the full implicit chemical system densely and solve it."""
    Nx = grid.Nx
    lam = dt / (params.eps * grid.dx)
    c = 2.0 * params.eps * params.D_N1 / (2.0 * params.eps * params.D_N1 + grid.dx)
    m = 2 * (Nx + 1)
    A = np.zeros((m, m))
    b = np.empty(m)
    vi = lambda i: 2 * i          # noqa: E731
    wi = lambda i: 2 * i + 1      # noqa: E731
    for i in range(Nx + 1):
        A[vi(i), vi(i)] += 1.0 + lam
        A[vi(i), wi(i)] += -lam + lam * c
        if i >= 1:
            A[vi(i), vi(i - 1)] += -lam * c
        elif rule == "copy":
            A[vi(0), vi(1)] += -lam * c
        else:
            A[vi(0), wi(0)] += -lam * c
        b[vi(i)] = diag.V[i] + 0.5 * dt * n_new[i]

        A[wi(i), wi(i)] += 1.0 + lam
        A[wi(i), vi(i)] += -lam + lam * c
        if i <= Nx - 1:
            A[wi(i), wi(i + 1)] += -lam * c
        elif rule == "copy":
            A[wi(Nx), wi(Nx - 1)] += -lam * c
        else:
            A[wi(Nx), vi(Nx)] += -lam * c
        b[wi(i)] = diag.W[i] + 0.5 * dt * n_new[i]
    x = np.linalg.solve(A, b)
    return x[0::2], x[1::2]


def dense_wb_step(state, params, grid, dt: float, rule: str):
    """Monolithic dense solve of the full per-step system (all four unknown
    families at once), fluxes transcribed in high precision.

    Returns (n, q, N1, Q1) arrays.
    """
    Nx = grid.Nx
    eps, dx = params.eps, grid.dx
    lam = dt / (eps * dx)
    c = 2.0 * eps * params.D_N1 / (2.0 * eps * params.D_N1 + dx)

    v = 0.5 * (state.n + eps * state.q)
    w = 0.5 * (state.n - eps * state.q)
    V = 0.5 * (state.N1 + eps * state.Q1)
    W = 0.5 * (state.N1 - eps * state.Q1)

    N1gl, N1gr = _ghosts_1d(state.N1, rule)
    N1e = np.concatenate(([N1gl], state.N1, [N1gr]))
    if rule == "copy":
        vgl, wgr = v[1], w[-2]
    else:
        vgl, wgr = w[0], v[-1]
    ve = np.concatenate(([vgl], v))      # v_{i-1} for interfaces i-1/2
    we = np.concatenate((w, [wgr]))      # w_i for interfaces i-1/2
    f = np.empty(Nx + 2)
    for j in range(Nx + 2):
        a_j = (params.alpha1 / params.D_n) * (N1e[j + 1] - N1e[j]) / dx
        f[j] = flux_f_highprec(ve[j], we[j], a_j, eps, params.D_n, dx)

    m = 4 * (Nx + 1)
    A = np.zeros((m, m))
    b = np.empty(m)
    vi = lambda i: 4 * i          # noqa: E731
    wi = lambda i: 4 * i + 1      # noqa: E731
    Vi = lambda i: 4 * i + 2      # noqa: E731
    Wi = lambda i: 4 * i + 3      # noqa: E731
    for i in range(Nx + 1):
        A[vi(i), vi(i)] = 1.0 + lam
        A[vi(i), wi(i)] = -lam
        b[vi(i)] = v[i] + lam * f[i]

        A[wi(i), wi(i)] = 1.0 + lam
        A[wi(i), vi(i)] = -lam
        b[wi(i)] = w[i] - lam * f[i + 1]

        A[Vi(i), Vi(i)] = 1.0 + lam
        A[Vi(i), Wi(i)] = -lam + lam * c
        if i >= 1:
            A[Vi(i), Vi(i - 1)] += -lam * c
        elif rule == "copy":
            A[Vi(0), Vi(1)] += -lam * c
        else:
            A[Vi(0), Wi(0)] += -lam * c
        A[Vi(i), vi(i)] += -0.5 * dt
        A[Vi(i), wi(i)] += -0.5 * dt
        b[Vi(i)] = V[i]

        A[Wi(i), Wi(i)] = 1.0 + lam
        A[Wi(i), Vi(i)] = -lam + lam * c
        if i <= Nx - 1:
            A[Wi(i), Wi(i + 1)] += -lam * c
        elif rule == "copy":
            A[Wi(Nx), Wi(Nx - 1)] += -lam * c
        else:
            A[Wi(Nx), Vi(Nx)] += -lam * c
        A[Wi(i), vi(i)] += -0.5 * dt
        A[Wi(i), wi(i)] += -0.5 * dt
        b[Wi(i)] = W[i]

    x = np.linalg.solve(A, b)
    vn, wn, Vn, Wn = x[0::4], x[1::4], x[2::4], x[3::4]
    return vn + wn, (vn - wn) / eps, Vn + Wn, (Vn - Wn) / eps


def dense_ks_chemical(S, n_new, params, grid, dt: float, rule: str):
    """Dense solve of the implicit centered-diffusion step for the chemical."""
    Nx = grid.Nx
    beta = dt * params.D_N1 / grid.dx**2
    m = Nx + 1
    A = np.zeros((m, m))
    for i in range(m):
        A[i, i] = 1.0 + 2.0 * beta
        for jj in (i - 1, i + 1):
            j = jj
            if j == -1:
                j = 1 if rule == "copy" else 0
            elif j == m:
                j = m - 2 if rule == "copy" else m - 1
            A[i, j] += -beta
    return np.linalg.solve(A, np.asarray(S) + dt * np.asarray(n_new))


def _pad2(field, rule: str, x_odd: bool, y_odd: bool):
    """Ghost-extended copy of a 2D field, transcribed with explicit slices."""
    nx, ny = field.shape
    out = np.zeros((nx + 2, ny + 2))
    out[1:-1, 1:-1] = field
    if rule == "copy":
        out[0, 1:-1] = field[1, :]
        out[-1, 1:-1] = field[-2, :]
        out[1:-1, 0] = field[:, 1]
        out[1:-1, -1] = field[:, -2]
        out[0, 0], out[0, -1] = field[1, 1], field[1, -2]
        out[-1, 0], out[-1, -1] = field[-2, 1], field[-2, -2]
    else:
        sx = -1.0 if x_odd else 1.0
        sy = -1.0 if y_odd else 1.0
        out[0, 1:-1] = sx * field[0, :]
        out[-1, 1:-1] = sx * field[-1, :]
        out[1:-1, 0] = sy * field[:, 0]
        out[1:-1, -1] = sy * field[:, -1]
        out[0, 0], out[0, -1] = sx * sy * field[0, 0], sx * sy * field[0, -1]
        out[-1, 0], out[-1, -1] = sx * sy * field[-1, 0], sx * sy * field[-1, -1]
    return out


_XODD = (False, True, False, False, True, False)
_YODD = (False, False, True, False, False, True)


def lf_transcription_step(state, params, grid, dt: float, rule: str):
    """Literal loop transcription of the conservative Lax-Friedrichs substep."""
    s = params.s
    ax = ay = s / np.sqrt(2.0)
    fields = (state.n, state.q1, state.q2, state.N1, state.Q1x, state.Q1y)
    P = [_pad2(F, rule, _XODD[k], _YODD[k]) for k, F in enumerate(fields)]

    def F1(U):
        return (U[1], 0.5 * s * s * U[0], 0.0, U[4], 0.5 * s * s * U[3], 0.0)

    def F2(U):
        return (U[2], 0.0, 0.5 * s * s * U[0], U[5], 0.0, 0.5 * s * s * U[3])

    nx, ny = state.n.shape
    out = [np.empty((nx, ny)) for _ in range(6)]
    for i in range(nx):
        for j in range(ny):
            ip, jp = i + 1, j + 1  # padded indices
            U_c = [P[k][ip, jp] for k in range(6)]
            U_w = [P[k][ip - 1, jp] for k in range(6)]
            U_e = [P[k][ip + 1, jp] for k in range(6)]
            U_s = [P[k][ip, jp - 1] for k in range(6)]
            U_n = [P[k][ip, jp + 1] for k in range(6)]
            F1c, F1w, F1e = F1(U_c), F1(U_w), F1(U_e)
            F2c, F2s, F2n = F2(U_c), F2(U_s), F2(U_n)
            for k in range(6):
                fxp = 0.5 * (F1c[k] + F1e[k]) - 0.5 * ax * (U_e[k] - U_c[k])
                fxm = 0.5 * (F1w[k] + F1c[k]) - 0.5 * ax * (U_c[k] - U_w[k])
                fyp = 0.5 * (F2c[k] + F2n[k]) - 0.5 * ay * (U_n[k] - U_c[k])
                fym = 0.5 * (F2s[k] + F2c[k]) - 0.5 * ay * (U_c[k] - U_s[k])
                out[k][i, j] = (U_c[k] - dt / grid.dx * (fxp - fxm)
                                - dt / grid.dy * (fyp - fym))
    return out


def source_fixed_point(state, params, grid, dt: float, rule: str,
                       tol: float = 1e-15, max_iter: int = 500):
    """Picard iteration of U = U* + dt*R_d(U) on the whole field.

    Requires dt*mu1 < 1 and dt*sigma1 < 1 so the map contracts.
    """
    n0, q10, q20 = state.n, state.q1, state.q2
    N10, Q1x0, Q1y0 = state.N1, state.Q1x, state.Q1y
    n, q1, q2 = n0.copy(), q10.copy(), q20.copy()
    N1, Q1x, Q1y = N10.copy(), Q1x0.copy(), Q1y0.copy()
    for _ in range(max_iter):
        N1p = _pad2(N1, rule, False, False)
        gx = (N1p[2:, 1:-1] - N1p[:-2, 1:-1]) / (2.0 * grid.dx)
        gy = (N1p[1:-1, 2:] - N1p[1:-1, :-2]) / (2.0 * grid.dy)
        n_n = n0.copy()
        q1_n = q10 + dt * (-params.mu1 * q1 + params.mu2 * n * params.alpha1 * gx)
        q2_n = q20 + dt * (-params.mu1 * q2 + params.mu2 * n * params.alpha1 * gy)
        N1_n = N10 + dt * n
        Q1x_n = Q1x0 - dt * params.sigma1 * Q1x
        Q1y_n = Q1y0 - dt * params.sigma1 * Q1y
        delta = max(np.max(np.abs(q1_n - q1)), np.max(np.abs(q2_n - q2)),
                    np.max(np.abs(N1_n - N1)), np.max(np.abs(Q1x_n - Q1x)),
                    np.max(np.abs(Q1y_n - Q1y)), np.max(np.abs(n_n - n)))
        n, q1, q2, N1, Q1x, Q1y = n_n, q1_n, q2_n, N1_n, Q1x_n, Q1y_n
        if delta < tol:
            break
    return n, q1, q2, N1, Q1x, Q1y


def kinetic_transcription_step(kstate, params, grid, dt: float, rule: str):
    """Literal per-node transcription of the kinetic step: scalar upwind
    transport, then 2x2 linear collision solves assembled per node."""
    s, dx = params.s, grid.dx
    nu = s * dt / dx
    fp, fm = kstate.f_plus, kstate.f_minus
    gp, gm = kstate.g_plus, kstate.g_minus
    N = fp.shape[0]

    if rule == "copy":
        fp_l, fm_r, gp_l, gm_r = fp[1], fm[-2], gp[1], gm[-2]
    else:
        fp_l, fm_r, gp_l, gm_r = fm[0], fp[-1], gm[0], gp[-1]
    fp_t, fm_t = np.empty(N), np.empty(N)
    gp_t, gm_t = np.empty(N), np.empty(N)
    for i in range(N):
        fpl = fp[i - 1] if i >= 1 else fp_l
        gpl = gp[i - 1] if i >= 1 else gp_l
        fmr = fm[i + 1] if i <= N - 2 else fm_r
        gmr = gm[i + 1] if i <= N - 2 else gm_r
        fp_t[i] = fp[i] - nu * (fp[i] - fpl)
        fm_t[i] = fm[i] - nu * (fm[i] - fmr)
        gp_t[i] = gp[i] - nu * (gp[i] - gpl)
        gm_t[i] = gm[i] - nu * (gm[i] - gmr)

    N1_t = gp_t + gm_t
    if rule == "copy":
        N1e = np.concatenate(([N1_t[1]], N1_t, [N1_t[-2]]))
    else:
        N1e = np.concatenate(([N1_t[0]], N1_t, [N1_t[-1]]))

    M = params.mu0 / params.eps_k
    fp_n, fm_n = np.empty(N), np.empty(N)
    gp_n, gm_n = np.empty(N), np.empty(N)
    for i in range(N):
        a = params.alpha1 * (N1e[i + 2] - N1e[i]) / (2.0 * dx)
        n_i = fp_t[i] + fm_t[i]
        q_i = s * (fp_t[i] - fm_t[i])
        L1p = params.mu1 * (0.5 * n_i - fp_t[i]) \
            - params.mu2 / s**2 * (0.5 * q_i - s * fp_t[i]) * a
        L1m = params.mu1 * (0.5 * n_i - fm_t[i]) \
            - params.mu2 / s**2 * (0.5 * q_i + s * fm_t[i]) * a
        # (1 + dt*M) f - dt*M * F(f) = f_t + dt*L1, with
        # F+ = ((fp+fm) + (fp-fm))/2, F- = ((fp+fm) - (fp-fm))/2
        dFp = (0.5 * (1.0 + 1.0), 0.5 * (1.0 - 1.0))   # dF+/dfp, dF+/dfm
        dFm = (0.5 * (1.0 - 1.0), 0.5 * (1.0 + 1.0))
        A = np.array([[1.0 + dt * M - dt * M * dFp[0], -dt * M * dFp[1]],
                      [-dt * M * dFm[0], 1.0 + dt * M - dt * M * dFm[1]]])
        rhs = np.array([fp_t[i] + dt * L1p, fm_t[i] + dt * L1m])
        fp_n[i], fm_n[i] = np.linalg.solve(A, rhs)
        # (1 + dt*sigma1) g - dt*sigma1/2*(gp + gm) = g_t + dt*n/2
        sg = params.sigma1
        Ag = np.array([[1.0 + dt * sg - 0.5 * dt * sg, -0.5 * dt * sg],
                       [-0.5 * dt * sg, 1.0 + dt * sg - 0.5 * dt * sg]])
        rg = np.array([gp_t[i] + 0.5 * dt * n_i, gm_t[i] + 0.5 * dt * n_i])
        gp_n[i], gm_n[i] = np.linalg.solve(Ag, rg)
    return fp_n, fm_n, gp_n, gm_n


def local_maxima_2d(n: np.ndarray):
    """Interior strict local maxima of a 2D field, sorted by value descending.

    Returns (indices, values) with indices shaped (k, 2).
    """
    c = n[1:-1, 1:-1]
    mask = np.ones_like(c, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= c > n[1 + di:n.shape[0] - 1 + di, 1 + dj:n.shape[1] - 1 + dj]
    idx = np.argwhere(mask) + 1
    vals = n[idx[:, 0], idx[:, 1]]
    order = np.argsort(vals)[::-1]
    return idx[order], vals[order]
