"""Uniform node-centered grids, macroscopic field containers and diagnostics.

Fields are stored at nodes x_i = -L + i*dx, i = 0..Nx (boundary nodes
included).  Ghost values for stencil schemes follow either the even-copy rule
(ghost = second node in from the wall) or the reflecting rule (ghost mirrors
the wall node, sign-flipped for flux-like quantities).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FLUX_RULES = ("copy", "reflect")


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Uniform grid on [-L, L] with Nx cells and Nx+1 nodes."""

    L: float
    Nx: int
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.L > 0:
            raise ValueError(f"L must be positive (got {self.L!r})")
        if self.Nx < 2:
            raise ValueError(f"Nx must be at least 2 (got {self.Nx!r})")
        object.__setattr__(self, "dx", 2.0 * self.L / self.Nx)
        object.__setattr__(self, "x", _symmetric_nodes(self.L, self.Nx))


def _symmetric_nodes(L: float, N: int) -> np.ndarray:
    """Uniform nodes on [-L, L], antisymmetrized so x[N-i] == -x[i] bitwise
    (mirror-symmetric initial data then mirrors exactly)."""
    x = np.linspace(-L, L, N + 1)
    return 0.5 * (x - x[::-1])


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Uniform grid on [-Lx, Lx] x [-Ly, Ly] with (Nx+1) x (Ny+1) nodes."""

    Lx: float
    Ly: float
    Nx: int
    Ny: int
    dx: float = field(init=False)
    dy: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    y: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        for name, L in (("Lx", self.Lx), ("Ly", self.Ly)):
            if not L > 0:
                raise ValueError(f"{name} must be positive (got {L!r})")
        for name, N in (("Nx", self.Nx), ("Ny", self.Ny)):
            if N < 2:
                raise ValueError(f"{name} must be at least 2 (got {N!r})")
        object.__setattr__(self, "dx", 2.0 * self.Lx / self.Nx)
        object.__setattr__(self, "dy", 2.0 * self.Ly / self.Ny)
        object.__setattr__(self, "x", _symmetric_nodes(self.Lx, self.Nx))
        object.__setattr__(self, "y", _symmetric_nodes(self.Ly, self.Ny))


@dataclass
class MacroState1D:
    """Node values of density n, flux q = n*u, chemical N1 and chemical flux Q1."""

    n: np.ndarray
    q: np.ndarray
    N1: np.ndarray
    Q1: np.ndarray

    def __post_init__(self) -> None:
        self.n = np.asarray(self.n, dtype=float)
        self.q = np.asarray(self.q, dtype=float)
        self.N1 = np.asarray(self.N1, dtype=float)
        self.Q1 = np.asarray(self.Q1, dtype=float)
        if not (self.n.shape == self.q.shape == self.N1.shape == self.Q1.shape):
            raise ValueError("all 1D state arrays must have the same shape")

    @classmethod
    def zeros(cls, grid: Grid1D) -> "MacroState1D":
        shape = grid.Nx + 1
        return cls(*(np.zeros(shape) for _ in range(4)))

    def copy(self) -> "MacroState1D":
        return MacroState1D(self.n.copy(), self.q.copy(),
                            self.N1.copy(), self.Q1.copy())


@dataclass
class MacroState2D:
    """Node values of the six conserved components (n, q1, q2, N1, Q1x, Q1y)."""

    n: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    N1: np.ndarray
    Q1x: np.ndarray
    Q1y: np.ndarray

    def __post_init__(self) -> None:
        arrays = [np.asarray(a, dtype=float) for a in
                  (self.n, self.q1, self.q2, self.N1, self.Q1x, self.Q1y)]
        self.n, self.q1, self.q2, self.N1, self.Q1x, self.Q1y = arrays
        if len({a.shape for a in arrays}) != 1 or arrays[0].ndim != 2:
            raise ValueError("all 2D state arrays must share one 2D shape")

    @classmethod
    def zeros(cls, grid: Grid2D) -> "MacroState2D":
        shape = (grid.Nx + 1, grid.Ny + 1)
        return cls(*(np.zeros(shape) for _ in range(6)))

    def copy(self) -> "MacroState2D":
        return MacroState2D(*(a.copy() for a in
                              (self.n, self.q1, self.q2,
                               self.N1, self.Q1x, self.Q1y)))


def gaussian_ic_1d(grid: Grid1D, n0: float, x0: float, sigma: float) -> MacroState1D:
    """Symmetric two-bump Gaussian density at rest (q = N1 = Q1 = 0).

    n(x) = n0/(2*pi*sigma^2) * [exp(-(x-x0)^2/(2 sigma^2)) + exp(-(x+x0)^2/(2 sigma^2))]
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive (got {sigma!r})")
    x = grid.x
    amp = n0 / (2.0 * np.pi * sigma**2)
    n = amp * (np.exp(-((x - x0) ** 2) / (2.0 * sigma**2))
               + np.exp(-((x + x0) ** 2) / (2.0 * sigma**2)))
    zero = np.zeros_like(n)
    return MacroState1D(n, zero.copy(), zero.copy(), zero.copy())


def gaussian_ic_2d(grid: Grid2D, n0: float, x0: float, y0: float,
                   sigma: float) -> MacroState2D:
    """Two Gaussian bumps at +-(x0, y0), all fluxes and the chemical at rest."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive (got {sigma!r})")
    X, Y = np.meshgrid(grid.x, grid.y, indexing="ij")
    amp = n0 / (2.0 * np.pi * sigma**2)
    n = amp * (np.exp(-(((X - x0) ** 2) + (Y - y0) ** 2) / (2.0 * sigma**2))
               + np.exp(-(((X + x0) ** 2) + (Y + y0) ** 2) / (2.0 * sigma**2)))
    zero = np.zeros_like(n)
    return MacroState2D(n, zero.copy(), zero.copy(), zero.copy(),
                        zero.copy(), zero.copy())


def ghost_values_1d(fieldvals: np.ndarray) -> tuple[float, float]:
    """Even-copy ghost pair: (field[1], field[Nx-1]).

    The same pattern applies to every macroscopic field.
    """
    fieldvals = np.asarray(fieldvals)
    if fieldvals.shape[0] < 3:
        raise ValueError("field needs at least 3 nodes for ghost values")
    return float(fieldvals[1]), float(fieldvals[-2])


def extend_1d(fieldvals: np.ndarray, rule: str = "copy", odd: bool = False) -> np.ndarray:
    """Field extended by one ghost node per side according to the flux rule.

    copy:    ghost = second node in (even extension about the wall node).
    reflect: ghost = wall node, negated when the field is flux-like (odd).
    """
    fieldvals = np.asarray(fieldvals, dtype=float)
    if fieldvals.shape[0] < 3:
        raise ValueError("field needs at least 3 nodes for ghost values")
    if rule == "copy":
        left, right = fieldvals[1], fieldvals[-2]
    elif rule == "reflect":
        sign = -1.0 if odd else 1.0
        left, right = sign * fieldvals[0], sign * fieldvals[-1]
    else:
        raise ValueError(f"unknown flux rule: {rule!r}")
    out = np.empty(fieldvals.shape[0] + 2)
    out[0] = left
    out[1:-1] = fieldvals
    out[-1] = right
    return out


def total_mass(fieldvals: np.ndarray, dx: float) -> float:
    """Riemann-sum mass dx * sum(field); diagnostic only, not a scheme ingredient."""
    return float(dx * np.sum(fieldvals))
