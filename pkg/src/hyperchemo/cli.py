"""Command-line entry point: run experiments, speed sweeps, and list presets."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import PRESETS, parse_config
from .errors import ConfigError, SolverError
from .runner import convergence_study, run_simulation


def _parse_k_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse --k list: {text!r}") from exc


def _load_config(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hyperchemo",
        description="Finite-volume solvers for a hyperbolic chemotaxis system "
                    "(1D well-balanced, Keller-Segel, 2D Lax-Friedrichs, "
                    "two-velocity kinetic).")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation from a config file")
    p_run.add_argument("config", type=Path, help="path to a section.key = value config")
    p_run.add_argument("--out", type=Path, default=None,
                       help="output directory (default: output.dir from the config)")

    p_study = sub.add_parser("study", help="wb-vs-ks sweep over speeds s = 5^k")
    p_study.add_argument("config", type=Path, help="base wb1d config")
    p_study.add_argument("--k", default="0,1,2,5,7,9",
                         help="comma-separated exponents (default 0,1,2,5,7,9)")
    p_study.add_argument("--out", type=Path, default=None)

    p_presets = sub.add_parser("presets", help="list built-in experiment configs")
    p_presets.add_argument("name", nargs="?", default=None,
                           help="print this preset's config text")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = _load_config(args.config)
            manifest = run_simulation(cfg, args.out)
            out = args.out if args.out is not None else cfg.out_dir
            print(f"wrote {len(manifest['snapshots'])} snapshot(s) and "
                  f"manifest.json to {out} ({manifest['steps']} steps, "
                  f"dt = {manifest['dt']:.6g})")
        elif args.command == "study":
            cfg = _load_config(args.config)
            out = args.out if args.out is not None else Path(cfg.out_dir)
            rows = convergence_study(cfg, _parse_k_list(args.k), out)
            print(f"wrote study.csv with {len(rows)} row(s) to {out}")
            for row in rows:
                print(f"  k={row['k']}: eps={row['eps']:.3e} "
                      f"E_L1={row['E_L1']:.3e} E_Linf={row['E_Linf']:.3e}")
        else:  # presets
            if args.name is None:
                for name, text in PRESETS.items():
                    summary = text.splitlines()[0].lstrip("# ")
                    print(f"{name}: {summary}")
            elif args.name in PRESETS:
                print(PRESETS[args.name], end="")
            else:
                raise ConfigError(
                    f"unknown preset {args.name!r}; available: {', '.join(PRESETS)}")
    except (ConfigError, SolverError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
