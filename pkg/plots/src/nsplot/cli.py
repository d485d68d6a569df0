"""Command line interface.

Exit codes: 0 success, 2 missing input, unknown column, or bad parameters.
"""

from __future__ import annotations

import argparse
import sys

from .errors import InputError
from .figures import plot_decay, plot_duals, plot_spectrum
from .tables import read_table

__all__ = ["main"]

# Sweep kind -> (default x column, log x axis).  Block length sweeps decay
# geometrically in lam itself, so they get a linear x axis.
_DECAY_AXES = {
    "frame-decay": ("m", True),
    "beta-decay": ("lam", False),
    "adc-decay": ("lam", True),
    "cs-two-stage": ("m", True),
    "cs-compressible": ("m", True),
}


def _parse_where(clauses) -> dict:
    where = {}
    for clause in clauses or []:
        if "=" not in clause:
            raise InputError(f"--where needs column=value, got {clause!r}")
        col, val = clause.split("=", 1)
        where[col] = val
    return where


def _cmd_decay(args) -> int:
    table = read_table(args.infile)
    kind = table.meta.get("kind")
    default_x, default_log = _DECAY_AXES.get(kind, (None, True))
    x_col = args.x or default_x
    if x_col is None:
        raise InputError(f"{args.infile} has kind {kind!r} with no default x axis; "
                         f"pass --x")
    if args.x_scale is not None:
        log_x = args.x_scale == "log"
    else:
        log_x = default_log if args.x is None else True
    fit = plot_decay(args.infile, args.out, x_col, y_col=args.y,
                     where=_parse_where(args.where), log_x=log_x, fmt=args.format)
    print(f"wrote {args.out}, slope={fit.slope:.17g} over {len(fit.points)} grid points")
    return 0


def _cmd_spectrum(args) -> int:
    plot_spectrum(args.infile, args.out, fmt=args.format)
    print(f"wrote {args.out}")
    return 0


def _cmd_duals(args) -> int:
    plot_duals(args.infile, args.dual, args.out, scale=args.scale, fmt=args.format)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot",
                                     description="Render result CSVs to figures")
    top = parser.add_subparsers(dest="command", required=True)

    p_decay = top.add_parser("decay", help="median error decay with fitted slope")
    p_decay.add_argument("--in", dest="infile", required=True)
    p_decay.add_argument("--x", help="x column, default chosen from the sweep kind")
    p_decay.add_argument("--y", default="err2")
    p_decay.add_argument("--x-scale", dest="x_scale", choices=["log", "linear"],
                         help="override the kind's default x axis scale")
    p_decay.add_argument("--where", action="append",
                         help="column=value row filter, repeatable")
    p_decay.add_argument("--format", choices=["svg", "png"])
    p_decay.add_argument("--out", required=True)
    p_decay.set_defaults(func=_cmd_decay)

    p_spec = top.add_parser("spectrum", help="overlaid error spectra with band shading")
    p_spec.add_argument("--in", dest="infile", required=True)
    p_spec.add_argument("--format", choices=["svg", "png"])
    p_spec.add_argument("--out", required=True)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_duals = top.add_parser("duals", help="frame and dual vectors as arrows")
    p_duals.add_argument("--in", dest="infile", required=True,
                         help="frame CSV (m x 2)")
    p_duals.add_argument("--dual", required=True, help="dual CSV (m x 2)")
    p_duals.add_argument("--scale", type=float, default=2.0,
                         help="draw the dual scaled up for visibility")
    p_duals.add_argument("--format", choices=["svg", "png"])
    p_duals.add_argument("--out", required=True)
    p_duals.set_defaults(func=_cmd_duals)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
