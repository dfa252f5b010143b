"""plotfig <tag> --csv-dir <dir> --out <file>"""

from __future__ import annotations

import argparse
import sys

from .recipes import TAGS, render
from .schemas import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotfig", description="Render figure analogs from xydqpt CSV bundles"
    )
    parser.add_argument("tag", help="|".join(TAGS))
    parser.add_argument("--csv-dir", required=True, help="directory holding the CSV bundle")
    parser.add_argument("--out", required=True, help="output raster image file")
    args = parser.parse_args(argv)
    try:
        panels = render(args.tag, args.csv_dir, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{args.tag}: {panels} panels -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
