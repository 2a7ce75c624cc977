"""Standalone plotting frontend: CSV in, SVG + PNG out."""

from __future__ import annotations

import argparse
import sys

from .render import REQUIRED_COLUMNS, FigureJob, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spinclone-plot",
        description="Regenerate publication-style figures from spinclone CSV output",
    )
    parser.add_argument("--figure", required=True,
                        choices=sorted(REQUIRED_COLUMNS))
    parser.add_argument("--csv", nargs="+", required=True,
                        help="input CSV path(s)")
    parser.add_argument("--out", required=True, help="output image stem")
    args = parser.parse_args(argv)
    try:
        written = render(FigureJob(args.figure, tuple(args.csv), args.out))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
