"""Experiment orchestration: stepping loops, snapshot CSVs, manifests, and the
wb-vs-ks speed sweep."""

from __future__ import annotations

import json
import time as _time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import kinetic1d, ks1d, lf2d, wb1d
from .config import RunConfig, render_config
from .errors import ConfigError, SolverError
from .ks1d import KSState1D
from .mesh import (Grid1D, Grid2D, MacroState1D, gaussian_ic_1d, gaussian_ic_2d,
                   total_mass)
from .model import ModelParams, derive_coefficients

SNAPSHOT_FMT = "%.17g"
COLUMNS_1D = ("x", "n", "q", "N1", "Q1")
COLUMNS_2D = ("x", "y", "n", "q1", "q2", "N1", "Q1x", "Q1y")
STUDY_COLUMNS = ("k", "eps", "E_L1", "E_Linf")

# time comparisons while stepping toward an output time
_TIME_EPS = 1e-12


def make_grid(cfg: RunConfig):
    if cfg.is_2d:
        return Grid2D(cfg.Lx, cfg.Ly, cfg.Nx, cfg.Ny)
    return Grid1D(cfg.L, cfg.Nx)


def make_params(cfg: RunConfig) -> ModelParams:
    return derive_coefficients(cfg.s, cfg.D_n, cfg.D_N1, cfg.alpha1,
                               mu0=cfg.mu0, eps_k=cfg.eps_k,
                               d=2 if cfg.is_2d else 1)


def nominal_dt(cfg: RunConfig, params: ModelParams, grid) -> tuple[float, str]:
    """Scheme default step (or the override) and the name of the rule used."""
    if cfg.dt_override is not None:
        return cfg.dt_override, "override"
    if cfg.scheme == "wb1d":
        return wb1d.default_dt(params, grid), "parabolic"
    if cfg.scheme == "ks1d":
        return ks1d.default_dt(params, grid), "parabolic"
    if cfg.scheme == "kinetic1d":
        return kinetic1d.default_dt(params, grid, cfg.cfl), "transport-cfl"
    if cfg.scheme == "lf2d":
        return lf2d.cfl_dt(params, grid, cfg.cfl), "transport-cfl"
    raise ConfigError(f"unknown scheme: {cfg.scheme!r}")


def _initial_state(cfg: RunConfig, grid):
    if cfg.is_2d:
        return gaussian_ic_2d(grid, cfg.n0, cfg.x0, cfg.y0, cfg.sigma)
    macro = gaussian_ic_1d(grid, cfg.n0, cfg.x0, cfg.sigma)
    if cfg.scheme == "ks1d":
        return KSState1D(macro.n, macro.N1)
    if cfg.scheme == "kinetic1d":
        return kinetic1d.from_macro(macro, cfg.s)
    return macro


def _stepper(cfg: RunConfig, params: ModelParams, grid):
    if cfg.scheme == "wb1d":
        ws = wb1d.WBWorkspace.for_grid(grid)
        return lambda st, dt: wb1d.wb_step(st, params, grid, dt, cfg.flux_rule, ws)
    if cfg.scheme == "ks1d":
        return lambda st, dt: ks1d.ks_step(st, params, grid, dt, cfg.flux_rule)
    if cfg.scheme == "kinetic1d":
        return lambda st, dt: kinetic1d.kinetic_step(st, params, grid, dt, cfg.flux_rule)
    if cfg.scheme == "lf2d":
        return lambda st, dt: lf2d.lf_step(st, params, grid, dt, cfg.flux_rule)
    raise ConfigError(f"unknown scheme: {cfg.scheme!r}")


def _density_state(cfg: RunConfig, state) -> MacroState1D:
    """View of a 1D run as macroscopic fields (n, q, N1, Q1)."""
    if cfg.scheme == "ks1d":
        zero = np.zeros_like(state.n)
        return MacroState1D(state.n, zero, state.S, zero.copy())
    if cfg.scheme == "kinetic1d":
        return kinetic1d.moments(state, cfg.s)
    return state


def write_snapshot_1d(path: Path, t: float, grid: Grid1D, state: MacroState1D,
                      header_items: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# time = {t:.17g}\n")
        for key, val in header_items.items():
            fh.write(f"# {key} = {val}\n")
        fh.write(",".join(COLUMNS_1D) + "\n")
        data = np.column_stack([grid.x, state.n, state.q, state.N1, state.Q1])
        np.savetxt(fh, data, fmt=SNAPSHOT_FMT, delimiter=",")


def write_snapshot_2d(path: Path, t: float, grid: Grid2D, state,
                      header_items: dict) -> None:
    X, Y = np.meshgrid(grid.x, grid.y, indexing="ij")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# time = {t:.17g}\n")
        for key, val in header_items.items():
            fh.write(f"# {key} = {val}\n")
        fh.write(",".join(COLUMNS_2D) + "\n")
        data = np.column_stack([X.ravel(), Y.ravel(), state.n.ravel(),
                                state.q1.ravel(), state.q2.ravel(),
                                state.N1.ravel(), state.Q1x.ravel(),
                                state.Q1y.ravel()])
        np.savetxt(fh, data, fmt=SNAPSHOT_FMT, delimiter=",")


def _run(cfg: RunConfig, out_dir: Path):
    """Step through all output times, writing snapshots; returns
    (manifest, final state)."""
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = make_grid(cfg)
    params = make_params(cfg)
    dt_nom, dt_rule = nominal_dt(cfg, params, grid)
    stepper = _stepper(cfg, params, grid)
    state = _initial_state(cfg, grid)

    header = {
        "scheme": cfg.scheme,
        "flux_rule": cfg.flux_rule,
        "dt": f"{dt_nom:.17g}",
        "s": f"{params.s:.17g}", "eps": f"{params.eps:.17g}",
        "D_n": f"{params.D_n:.17g}", "D_N1": f"{params.D_N1:.17g}",
        "alpha1": f"{params.alpha1:.17g}",
        "mu1": f"{params.mu1:.17g}", "mu2": f"{params.mu2:.17g}",
        "sigma1": f"{params.sigma1:.17g}",
    }

    snapshots = []
    steps = 0
    t = 0.0
    wall_start = _time.perf_counter()
    for snap_index, t_goal in enumerate(cfg.output_times):
        while t_goal - t > _TIME_EPS * max(1.0, t_goal):
            dt = min(dt_nom, t_goal - t)
            try:
                state = stepper(state, dt)
            except SolverError as exc:
                raise SolverError(f"step {steps + 1} at t = {t:.10g}: {exc}") from exc
            steps += 1
            t += dt
        t = t_goal
        fname = f"snapshot_{snap_index:03d}.csv"
        if cfg.is_2d:
            write_snapshot_2d(out_dir / fname, t, grid, state, header)
            mass = total_mass(state.n, grid.dx * grid.dy)
        else:
            macro = _density_state(cfg, state)
            write_snapshot_1d(out_dir / fname, t, grid, macro, header)
            mass = total_mass(macro.n, grid.dx)
        snapshots.append({"time": t, "file": fname, "mass_n": mass})
    wall = _time.perf_counter() - wall_start

    manifest = {
        "scheme": cfg.scheme,
        "config": render_config(cfg),
        "params": {
            "s": params.s, "eps": params.eps, "d": params.d,
            "D_n": params.D_n, "D_N1": params.D_N1, "alpha1": params.alpha1,
            "mu1": params.mu1, "mu2": params.mu2, "sigma1": params.sigma1,
            "tau1": params.tau1, "mu0": params.mu0, "eps_k": params.eps_k,
        },
        "grid": ({"Lx": grid.Lx, "Ly": grid.Ly, "Nx": grid.Nx, "Ny": grid.Ny,
                  "dx": grid.dx, "dy": grid.dy} if cfg.is_2d else
                 {"L": grid.L, "Nx": grid.Nx, "dx": grid.dx}),
        "flux_rule": cfg.flux_rule,
        "dt": dt_nom,
        "dt_rule": dt_rule,
        "steps": steps,
        "wall_time_s": wall,
        "snapshots": snapshots,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest, state


def run_simulation(cfg: RunConfig, out_dir: str | Path | None = None) -> dict:
    """Run one experiment; write snapshot CSVs and manifest.json; return the
    manifest.  The stepping dt is truncated so every requested output time is
    hit exactly."""
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    manifest, _ = _run(cfg, out)
    return manifest


def convergence_study(base_config: RunConfig, k_list, out_dir: str | Path) -> list[dict]:
    """Run the ks1d reference once and wb1d at s = 5^k for each k; tabulate the
    normalized L1/Linf density differences at t_end.

    All runs share the grid, initial condition and the dt of the limit scheme.
    Writes study.csv plus one subdirectory per member run; returns the rows.
    """
    if base_config.scheme != "wb1d":
        raise ConfigError(f"study base scheme must be wb1d (got {base_config.scheme!r})")
    k_list = list(k_list)
    if not k_list:
        raise ConfigError("study needs a nonempty list of exponents k")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    grid = make_grid(base_config)
    params = make_params(base_config)
    dt_shared = (base_config.dt_override if base_config.dt_override is not None
                 else ks1d.default_dt(params, grid))

    ks_cfg = replace(base_config, scheme="ks1d", dt_override=dt_shared,
                     output_times=[base_config.t_end])
    _, ks_state = _run(ks_cfg, out / "ks")
    n_ks = _density_state(ks_cfg, ks_state).n
    norm1 = float(np.sum(np.abs(n_ks)))
    norminf = float(np.max(np.abs(n_ks)))

    rows = []
    for k in k_list:
        s_k = 5.0 ** int(k)
        wb_cfg = replace(base_config, s=s_k, dt_override=dt_shared,
                         output_times=[base_config.t_end])
        _, wb_state = _run(wb_cfg, out / f"k_{int(k)}")
        diff = _density_state(wb_cfg, wb_state).n - n_ks
        rows.append({
            "k": int(k),
            "eps": 1.0 / s_k,
            "E_L1": float(np.sum(np.abs(diff))) / norm1,
            "E_Linf": float(np.max(np.abs(diff))) / norminf,
        })

    with open(out / "study.csv", "w", encoding="utf-8") as fh:
        fh.write("# wb1d density vs the shared-dt ks1d reference at t_end; "
                 "norms are discrete L1/Linf differences normalized by the "
                 "reference norm (scheme-comparison diagnostics)\n")
        fh.write(f"# t_end = {base_config.t_end:.17g}\n")
        fh.write(f"# dt = {dt_shared:.17g}\n")
        fh.write(",".join(STUDY_COLUMNS) + "\n")
        for row in rows:
            fh.write(f"{row['k']},{row['eps']:.17g},"
                     f"{row['E_L1']:.17g},{row['E_Linf']:.17g}\n")
    return rows
