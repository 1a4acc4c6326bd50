"""Command-line entry point: plot1d, plotconv, plot2d."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_convergence, plot_density_1d, plot_density_2d
from .tables import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chemoplots",
        description="Regenerate figures from hyperchemo snapshot CSVs and "
                    "study tables.")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("plot1d", help="density curves, one panel per 1D snapshot")
    p1.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="snapshot CSV paths")
    p1.add_argument("--out", required=True, help="output image path")

    pc = sub.add_parser("plotconv", help="log-scale error vs eps from a study table")
    pc.add_argument("--in", dest="inputs", nargs=1, required=True,
                    help="study.csv path")
    pc.add_argument("--out", required=True)

    p2 = sub.add_parser("plot2d", help="density heatmaps, one panel per 2D snapshot")
    p2.add_argument("--in", dest="inputs", nargs="+", required=True)
    p2.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "plot1d":
            out = plot_density_1d(args.inputs, args.out)
        elif args.command == "plotconv":
            out = plot_convergence(args.inputs[0], args.out)
        else:
            out = plot_density_2d(args.inputs, args.out)
        print(f"wrote {out}")
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
