"""Figure builders: density curves per snapshot, sweep convergence, heatmaps.

Strictly read-only with respect to the solver outputs; all physics numbers
come from the CSV files.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .tables import read_snapshot, read_study  # noqa: E402


def _panel_grid(count: int):
    ncols = min(2, count)
    nrows = math.ceil(count / ncols)
    return nrows, ncols


def plot_density_1d(snapshot_paths, out_path: str | Path) -> Path:
    """One panel per snapshot: x vs n, annotated with the snapshot time."""
    snapshot_paths = [Path(p) for p in snapshot_paths]
    if not snapshot_paths:
        raise ValueError("no snapshot files given")
    loaded = [read_snapshot(p) for p in snapshot_paths]
    nrows, ncols = _panel_grid(len(loaded))
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.2 * ncols, 3.4 * nrows),
                             squeeze=False)
    for ax in axes.ravel()[len(loaded):]:
        ax.set_axis_off()
    for ax, (t, cols), path in zip(axes.ravel(), loaded, snapshot_paths):
        ax.plot(cols["x"], cols["n"], lw=1.5)
        ax.set_xlabel("x")
        ax.set_ylabel("n")
        ax.set_title(f"t = {t:g}" if t is not None else path.name)
        ax.grid(True, alpha=0.3)
    fig.suptitle("cell density")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_convergence(study_path: str | Path, out_path: str | Path) -> Path:
    """Log-scale density error versus eps from a study table."""
    cols = read_study(study_path)
    order = np.argsort(cols["eps"])
    eps = cols["eps"][order]
    fig, ax = plt.subplots(figsize=(5.6, 4.2))
    ax.loglog(eps, cols["E_L1"][order], "o-", label="L1")
    ax.loglog(eps, cols["E_Linf"][order], "s--", label="Linf")
    ax.set_xlabel("eps = 1/s")
    ax.set_ylabel("density error vs limit scheme")
    ax.set_title("well-balanced scheme against the Keller-Segel reference")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def plot_density_2d(snapshot_paths, out_path: str | Path) -> Path:
    """Heatmap per snapshot, per-panel autoscale with the range in the title."""
    snapshot_paths = [Path(p) for p in snapshot_paths]
    if not snapshot_paths:
        raise ValueError("no snapshot files given")
    loaded = [read_snapshot(p, two_d=True) for p in snapshot_paths]
    nrows, ncols = _panel_grid(len(loaded))
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.4 * ncols, 4.4 * nrows),
                             squeeze=False)
    for ax in axes.ravel()[len(loaded):]:
        ax.set_axis_off()
    for ax, (t, cols), path in zip(axes.ravel(), loaded, snapshot_paths):
        x = np.unique(cols["x"])
        y = np.unique(cols["y"])
        n = cols["n"].reshape(len(x), len(y))
        mesh = ax.pcolormesh(x, y, n.T, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax)
        label = f"t = {t:g}" if t is not None else path.name
        ax.set_title(f"{label}   n in [{n.min():.3g}, {n.max():.3g}]")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_aspect("equal")
    fig.suptitle("cell density")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
