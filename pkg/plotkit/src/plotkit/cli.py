"""Command line mirror of PlotJob.

    plotkit --kind contour --input out/interleaved.csv --out rho.png \
            --levels 30 --level-min 0.135 --level-max 1.754

On success the verification metadata is printed as `key = value` lines.
Missing or garbled input exits 2 with a message on stderr.
"""

import argparse
import sys

from .io import PlotError
from .jobs import KINDS, PlotJob, plot


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Figures from active flux run directories.")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--input", dest="inputs", required=True, nargs="+",
                        help="input file(s); convergence takes several "
                             "report.json paths")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--levels", type=int, default=30,
                        help="contour level count (default 30)")
    parser.add_argument("--level-min", type=float, default=None)
    parser.add_argument("--level-max", type=float, default=None)
    parser.add_argument("--component", type=int, default=0,
                        help="field column index (default 0)")
    parser.add_argument("--row", type=int, default=None,
                        help="cutline: fixed y row index instead of the "
                             "diagonal")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        job = PlotJob(inputs=tuple(args.inputs), kind=args.kind,
                      out=args.out, levels=args.levels,
                      level_min=args.level_min, level_max=args.level_max,
                      component=args.component, row=args.row)
        meta = plot(job)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for key, value in meta.items():
        print(f"{key} = {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
