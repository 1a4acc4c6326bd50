"""Exception types shared by the solver modules."""


class SolverError(RuntimeError):
    """A numerical step failed (singular system, CFL violation, non-finite state)."""


class ConfigError(ValueError):
    """An experiment configuration is missing, malformed or inconsistent."""
