"""Command-line front end.

Subcommands:

* ``vfield field-plot --lambda L --px PX --py PY [--bounds ...] -o out.svg``
  renders a raw field's direction grid.
* ``vfield run SCENARIO -o DIR [--seed N]`` executes a scenario file and
  writes CSV logs plus figures.
* ``vfield validate SCENARIO`` checks a scenario file and reports the
  first violated invariant, if any.

Exit codes: 0 success, 2 validation/usage error, 3 collision or protocol
violation, 4 timeout.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ScenarioError
from .fields import FieldParams
from .geometry import Vec2
from .render import render_field
from .runner import EXIT_VALIDATION, run_scenario
from .scenario import load_scenario

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vfield",
        description="Vector-field motion planning: field plots and scenario runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_plot = sub.add_parser("field-plot", help="render a raw field's direction grid to SVG")
    p_plot.add_argument("--lambda", dest="lam", type=float, required=True,
                        help="field family parameter")
    p_plot.add_argument("--px", type=float, required=True, help="axis vector x component")
    p_plot.add_argument("--py", type=float, required=True, help="axis vector y component")
    p_plot.add_argument("--bounds", type=float, nargs=4, default=(-1.0, 1.0, -1.0, 1.0),
                        metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p_plot.add_argument("--grid-n", type=int, default=21, help="grid resolution per axis")
    p_plot.add_argument("-o", "--output", required=True, help="output SVG path")

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario", help="scenario file path")
    p_run.add_argument("-o", "--output", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the scenario's diagnostic seed")

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("scenario", help="scenario file path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "field-plot":
        try:
            field = FieldParams(lam=args.lam, p=Vec2(args.px, args.py))
            svg = render_field(field, tuple(args.bounds), args.grid_n)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_VALIDATION
        Path(args.output).write_text(svg)
        print(f"wrote {args.output}")
        return 0

    if args.command == "validate":
        try:
            sc = load_scenario(args.scenario)
        except ScenarioError as e:
            print(f"invalid: {e}", file=sys.stderr)
            return EXIT_VALIDATION
        print(f"ok: {sc.mode} scenario")
        return 0

    # run
    try:
        sc = load_scenario(args.scenario)
    except ScenarioError as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.seed is not None:
        sc = replace(sc, seed=args.seed)
    return run_scenario(sc, args.output)


if __name__ == "__main__":
    sys.exit(main())
