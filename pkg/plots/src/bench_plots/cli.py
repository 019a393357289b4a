"""``plot`` command: regenerate a convergence figure from a benchmark directory."""

from __future__ import annotations

import argparse
import sys

from .render import PLOTTABLE_METRICS, X_AXES, FigureSpec, RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render benchmark CSV traces as a convergence figure.",
    )
    parser.add_argument("--dir", required=True, metavar="OUT",
                        help="benchmark output directory (holds summary.csv)")
    parser.add_argument("--metric", default="rel_subopt", choices=PLOTTABLE_METRICS,
                        help="trace column for the y-axis (default: rel_subopt)")
    parser.add_argument("--save", default="figure.svg", metavar="FILE",
                        help="output file; .svg is native, .png uses matplotlib")
    parser.add_argument("--dataset", default=None,
                        help="only plot runs on this dataset")
    parser.add_argument("--x-axis", default="elapsed_s", choices=X_AXES,
                        help="trace column for the x-axis (default: elapsed_s)")
    parser.add_argument("--linear", action="store_true",
                        help="linear y-axis instead of the default log scale")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            input_dir=args.dir,
            metric=args.metric,
            save=args.save,
            dataset=args.dataset,
            log_y=not args.linear,
            x_axis=args.x_axis,
        )
        path = render(spec)
    except RenderError as e:
        print(f"plot error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
