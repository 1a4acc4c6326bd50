"""Model parameters of the hyperbolic chemotaxis system and their derived rates."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Coefficient set shared by all solvers.

    The turning rates are not free parameters: mu1 = mu2 = s^2/D_n and
    sigma1 = s^2/D_N1, so the large-speed limit keeps the macroscopic
    diffusivities D_n and D_N1 fixed.  eps = 1/s is stored explicitly because
    the 1D well-balanced scheme works in diagonal variables scaled by it.
    mu0 and eps_k only enter the discrete-velocity kinetic solver, where
    mu0/eps_k is the dominant relaxation rate toward local equilibrium.
    """

    s: float
    eps: float
    d: int
    D_n: float
    D_N1: float
    alpha1: float
    mu1: float
    mu2: float
    sigma1: float
    tau1: float
    mu0: float
    eps_k: float


def derive_coefficients(
    s: float,
    D_n: float,
    D_N1: float,
    alpha1: float,
    mu0: float = 1.0,
    eps_k: float = 1e-3,
    d: int = 1,
) -> ModelParams:
    """Build a validated ModelParams from the free coefficients.

    eps = 1/s, mu1 = mu2 = s^2/D_n, sigma1 = s^2/D_N1 and tau1 = 1 are derived;
    they are never set independently.
    """
    for name, value in (("s", s), ("D_n", D_n), ("D_N1", D_N1),
                        ("mu0", mu0), ("eps_k", eps_k)):
        if not value > 0:
            raise ValueError(f"{name} must be positive (got {value!r})")
    if d not in (1, 2):
        raise ValueError(f"d must be 1 or 2 (got {d!r})")
    s = float(s)
    D_n = float(D_n)
    D_N1 = float(D_N1)
    return ModelParams(
        s=s,
        eps=1.0 / s,
        d=int(d),
        D_n=D_n,
        D_N1=D_N1,
        alpha1=float(alpha1),
        mu1=s * s / D_n,
        mu2=s * s / D_n,
        sigma1=s * s / D_N1,
        tau1=1.0,
        mu0=float(mu0),
        eps_k=float(eps_k),
    )
