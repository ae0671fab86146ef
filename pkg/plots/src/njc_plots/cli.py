"""Command-line entry point for rendering njc trajectory exports."""

import argparse
import sys

from .errors import PlotsError
from .render import PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="njc-plots",
        description="Render njc trajectory CSV exports to PNG and SVG.",
    )
    parser.add_argument(
        "--csv",
        action="append",
        required=True,
        metavar="FILE",
        help="trajectory CSV to draw; repeat to overlay several runs",
    )
    parser.add_argument(
        "--out",
        required=True,
        metavar="FILE",
        help="output image path; .png and .svg are written with this stem",
    )
    parser.add_argument(
        "--no-overlay",
        action="store_true",
        help="draw only the preferred column, not the numeric cross-check",
    )
    parser.add_argument(
        "--envelopes",
        action="store_true",
        help="recompute envelopes from the sidecar parameters and draw them",
    )
    parser.add_argument("--title", default="", help="figure title")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        sources=tuple(args.csv),
        output=args.out,
        overlay=not args.no_overlay,
        envelopes=args.envelopes,
        title=args.title,
    )
    try:
        png_path, svg_path = render(spec)
    except PlotsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {png_path} and {svg_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
