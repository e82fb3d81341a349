"""plot --in r.csv --window 10 --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    parser.add_argument("--in", dest="csv_path", required=True, help="benchmark CSV")
    parser.add_argument("--window", type=int, default=10, help="moving-mean window")
    parser.add_argument("--out", dest="out_path", required=True, help="output image path")
    parser.add_argument("--algorithms", default="", help="comma list; default all")
    args = parser.parse_args(argv)

    algorithms = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
    try:
        spec = PlotSpec(csv_path=args.csv_path, window=args.window,
                        out_path=args.out_path, algorithms=algorithms)
        curves = render(spec)
    except (SchemaError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {args.out_path} with {len(curves)} curves")
    return 0


if __name__ == "__main__":
    sys.exit(main())
