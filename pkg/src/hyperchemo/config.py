"""Experiment configuration: line-oriented `section.key = value` documents.

Unknown keys are rejected so preset typos cannot silently change an
experiment.  Defaults: cfl = 0.9, mu0 = 1, eps_k = 1e-3, flux rule copy in 1D
and reflect in 2D, output_times = [t_end].
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ConfigError

SCHEMES_1D = ("wb1d", "ks1d", "kinetic1d")
SCHEMES_2D = ("lf2d",)
SCHEMES = SCHEMES_1D + SCHEMES_2D

# key -> value kind; None marks keys whose default depends on the scheme
_FLOAT_KEYS = {
    "grid.L", "grid.Lx", "grid.Ly",
    "model.s", "model.D_n", "model.D_N1", "model.alpha1",
    "model.mu0", "model.eps_k",
    "ic.n0", "ic.x0", "ic.y0", "ic.sigma",
    "time.t_end", "time.cfl", "time.dt_override",
}
_INT_KEYS = {"grid.Nx", "grid.Ny"}
_STR_KEYS = {"run.scheme", "boundary.flux_rule", "output.dir"}
_LIST_KEYS = {"time.output_times"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _LIST_KEYS


@dataclass
class RunConfig:
    """Validated description of one simulation run."""

    scheme: str
    # grid (1D uses L/Nx; 2D uses Lx/Ly/Nx/Ny)
    L: float | None = None
    Lx: float | None = None
    Ly: float | None = None
    Nx: int = 0
    Ny: int | None = None
    # model
    s: float = 1.0
    D_n: float = 1.0
    D_N1: float = 1.0
    alpha1: float = 0.0
    mu0: float = 1.0
    eps_k: float = 1e-3
    # initial condition
    n0: float = 1.0
    x0: float = 0.0
    y0: float | None = None
    sigma: float = 1.0
    # time
    t_end: float = 0.0
    cfl: float = 0.9
    dt_override: float | None = None
    output_times: list[float] = field(default_factory=list)
    # boundary and output
    flux_rule: str = "copy"
    out_dir: str = "out"

    @property
    def is_2d(self) -> bool:
        return self.scheme in SCHEMES_2D


def _parse_value(key: str, raw: str, lineno: int):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _LIST_KEYS:
            items = [p.strip() for p in raw.split(",") if p.strip()]
            return [float(p) for p in items]
        return raw
    except ValueError as exc:
        raise ConfigError(
            f"line {lineno}: cannot parse value for {key!r}: {raw!r}") from exc


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config document; raises ConfigError on any defect."""
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.key = value': {rawline!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key: {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key: {key!r}")
        values[key] = _parse_value(key, raw, lineno)
        lines[key] = lineno

    def require(key: str):
        if key not in values:
            raise ConfigError(f"missing key: {key}")
        return values[key]

    def where(key: str) -> str:
        return f"(line {lines[key]})" if key in lines else ""

    scheme = str(require("run.scheme"))
    if scheme not in SCHEMES:
        raise ConfigError(
            f"run.scheme must be one of {', '.join(SCHEMES)} (got {scheme!r}) {where('run.scheme')}")
    two_d = scheme in SCHEMES_2D

    cfg = RunConfig(scheme=scheme)
    cfg.s = float(require("model.s"))
    cfg.D_n = float(require("model.D_n"))
    cfg.D_N1 = float(require("model.D_N1"))
    cfg.alpha1 = float(require("model.alpha1"))
    cfg.mu0 = float(values.get("model.mu0", 1.0))
    cfg.eps_k = float(values.get("model.eps_k", 1e-3))

    cfg.n0 = float(require("ic.n0"))
    cfg.x0 = float(require("ic.x0"))
    cfg.sigma = float(require("ic.sigma"))

    if two_d:
        for bad in ("grid.L",):
            if bad in values:
                raise ConfigError(f"{bad} is a 1D key; scheme {scheme!r} needs "
                                  f"grid.Lx/grid.Ly {where(bad)}")
        cfg.Lx = float(require("grid.Lx"))
        cfg.Ly = float(require("grid.Ly"))
        cfg.Nx = int(require("grid.Nx"))
        cfg.Ny = int(require("grid.Ny"))
        cfg.y0 = float(require("ic.y0"))
    else:
        for bad in ("grid.Lx", "grid.Ly", "grid.Ny", "ic.y0"):
            if bad in values:
                raise ConfigError(f"{bad} is a 2D key; scheme {scheme!r} uses "
                                  f"grid.L/grid.Nx {where(bad)}")
        cfg.L = float(require("grid.L"))
        cfg.Nx = int(require("grid.Nx"))

    cfg.t_end = float(require("time.t_end"))
    cfg.cfl = float(values.get("time.cfl", 0.9))
    if "time.dt_override" in values:
        cfg.dt_override = float(values["time.dt_override"])
    cfg.output_times = list(values.get("time.output_times", [cfg.t_end]))
    cfg.flux_rule = str(values.get("boundary.flux_rule",
                                   "reflect" if two_d else "copy"))
    cfg.out_dir = str(values.get("output.dir", "out"))

    # validation
    def positive(key: str, val) -> None:
        if not val > 0:
            raise ConfigError(f"{key} must be positive (got {val!r}) {where(key)}")

    positive("model.s", cfg.s)
    positive("model.D_n", cfg.D_n)
    positive("model.D_N1", cfg.D_N1)
    positive("model.mu0", cfg.mu0)
    positive("model.eps_k", cfg.eps_k)
    positive("ic.sigma", cfg.sigma)
    positive("time.t_end", cfg.t_end)
    if not 0.0 < cfg.cfl <= 1.0:
        raise ConfigError(f"time.cfl must be in (0, 1] (got {cfg.cfl!r}) {where('time.cfl')}")
    if cfg.dt_override is not None:
        positive("time.dt_override", cfg.dt_override)
    if cfg.Nx < 2:
        raise ConfigError(f"grid.Nx must be at least 2 (got {cfg.Nx!r}) {where('grid.Nx')}")
    if two_d:
        positive("grid.Lx", cfg.Lx)
        positive("grid.Ly", cfg.Ly)
        if cfg.Ny is None or cfg.Ny < 2:
            raise ConfigError(f"grid.Ny must be at least 2 (got {cfg.Ny!r}) {where('grid.Ny')}")
    else:
        positive("grid.L", cfg.L)
    if cfg.flux_rule not in ("copy", "reflect"):
        raise ConfigError(f"boundary.flux_rule must be copy or reflect "
                          f"(got {cfg.flux_rule!r}) {where('boundary.flux_rule')}")
    if not cfg.output_times:
        raise ConfigError("time.output_times must not be empty")
    if sorted(cfg.output_times) != cfg.output_times:
        raise ConfigError(f"time.output_times must be sorted {where('time.output_times')}")
    if cfg.output_times[0] < 0.0 or cfg.output_times[-1] > cfg.t_end + 1e-15:
        raise ConfigError(f"time.output_times must lie within [0, t_end] "
                          f"{where('time.output_times')}")
    return cfg


def render_config(cfg: RunConfig) -> str:
    """Canonical text form; parse_config(render_config(cfg)) == cfg."""
    out = [f"run.scheme = {cfg.scheme}"]
    if cfg.is_2d:
        out += [f"grid.Lx = {cfg.Lx!r}", f"grid.Ly = {cfg.Ly!r}",
                f"grid.Nx = {cfg.Nx}", f"grid.Ny = {cfg.Ny}"]
    else:
        out += [f"grid.L = {cfg.L!r}", f"grid.Nx = {cfg.Nx}"]
    out += [
        f"model.s = {cfg.s!r}",
        f"model.D_n = {cfg.D_n!r}",
        f"model.D_N1 = {cfg.D_N1!r}",
        f"model.alpha1 = {cfg.alpha1!r}",
        f"model.mu0 = {cfg.mu0!r}",
        f"model.eps_k = {cfg.eps_k!r}",
        f"ic.n0 = {cfg.n0!r}",
        f"ic.x0 = {cfg.x0!r}",
    ]
    if cfg.is_2d:
        out.append(f"ic.y0 = {cfg.y0!r}")
    out += [
        f"ic.sigma = {cfg.sigma!r}",
        f"time.t_end = {cfg.t_end!r}",
        f"time.cfl = {cfg.cfl!r}",
    ]
    if cfg.dt_override is not None:
        out.append(f"time.dt_override = {cfg.dt_override!r}")
    out.append("time.output_times = " + ", ".join(repr(t) for t in cfg.output_times))
    out += [f"boundary.flux_rule = {cfg.flux_rule}",
            f"output.dir = {cfg.out_dir}"]
    return "\n".join(out) + "\n"


def with_speed(cfg: RunConfig, s: float) -> RunConfig:
    """Copy of the config with a different microscopic speed."""
    return replace(cfg, s=float(s))


# built-in experiment presets (1D two-bump merging, the wb-vs-ks sweep base,
# the 2D two-bump merging, and a kinetic/macro comparison run)
PRESETS: dict[str, str] = {
    "bumps1d_wb": """\
# 1D two-bump aggregation, well-balanced scheme at s = 5^9
run.scheme = wb1d
grid.L = 2
grid.Nx = 200
model.s = 1953125
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
ic.n0 = 5
ic.x0 = 0.5
ic.sigma = 0.3
time.t_end = 0.08
time.output_times = 0.01, 0.02, 0.06, 0.08
""",
    "bumps1d_ks": """\
# 1D two-bump aggregation, Keller-Segel reference scheme
run.scheme = ks1d
grid.L = 2
grid.Nx = 200
model.s = 1953125
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
ic.n0 = 5
ic.x0 = 0.5
ic.sigma = 0.3
time.t_end = 0.08
time.output_times = 0.01, 0.02, 0.06, 0.08
""",
    "sweep1d_base": """\
# base run for the wb-vs-ks speed sweep (s is replaced by 5^k per run)
run.scheme = wb1d
grid.L = 2
grid.Nx = 200
model.s = 1953125
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
ic.n0 = 5
ic.x0 = 0.5
ic.sigma = 0.3
time.t_end = 0.05
time.output_times = 0.05
""",
    "bumps2d_lf": """\
# 2D two-bump aggregation, Lax-Friedrichs splitting at s = 100
run.scheme = lf2d
grid.Lx = 0.4
grid.Ly = 0.4
grid.Nx = 100
grid.Ny = 100
model.s = 100
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
ic.n0 = 0.25
ic.x0 = 0.09
ic.y0 = 0.09
ic.sigma = 0.03
time.t_end = 0.004
time.output_times = 0.001, 0.002, 0.004
""",
    "bumps1d_kinetic": """\
# two-velocity kinetic run for comparison against the 1D macroscopic schemes
run.scheme = kinetic1d
grid.L = 2
grid.Nx = 200
model.s = 10
model.D_n = 1
model.D_N1 = 0.001
model.alpha1 = 0.33
model.eps_k = 0.001
ic.n0 = 5
ic.x0 = 0.5
ic.sigma = 0.3
time.t_end = 0.05
time.output_times = 0.05
""",
}
