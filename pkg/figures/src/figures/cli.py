"""figures <kind> --in <paths...> --out <file>"""

import argparse
import sys

from .iodata import KINDS, FigureSpec, SchemaError
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render SVG figures from gnplclt harness outputs",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="PATH", help="input results.csv / summary.json files")
    parser.add_argument("--out", required=True, help="output SVG path")
    parser.add_argument("--xscale", default="linear", choices=["linear", "log"])
    parser.add_argument("--yscale", default="log", choices=["linear", "log"])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            xscale=args.xscale,
            yscale=args.yscale,
        )
        path = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
