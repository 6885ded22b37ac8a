"""Command-line figure rendering.

    tetrafill-figs <kind> --in CSV --out IMG [--zoom lo,hi] [--log]
                   [--value COLUMN] [--base regular|disphenoid]

Exit status: 0 on success, 1 on usage errors, 2 when the CSV schema does
not match the figure kind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_KINDS, FigureSpec, SchemaMismatch, render


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _parse_zoom(text):
    try:
        lo, _, hi = text.partition(",")
        return float(lo), float(hi)
    except ValueError:
        raise ValueError(f"bad zoom {text!r}, expected lo,hi") from None


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = _Parser(prog="tetrafill-figs")
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output", required=True)
    parser.add_argument("--zoom")
    parser.add_argument("--log", action="store_true")
    parser.add_argument("--value", help="column to map (heatmap and perturbation)")
    parser.add_argument("--base", choices=["regular", "disphenoid"], default="regular")
    try:
        args = parser.parse_args(argv)
        spec = FigureSpec(
            input_csv=Path(args.input_csv),
            figure_kind=args.kind,
            output=Path(args.output),
            zoom=_parse_zoom(args.zoom) if args.zoom else None,
            log=args.log,
            value=args.value,
            base=args.base,
        )
    except SystemExit as exit_:
        return int(exit_.code or 0)
    except ValueError as err:
        print(f"tetrafill-figs: error: {err}", file=sys.stderr)
        return 1
    try:
        path = render(spec)
    except SchemaMismatch as err:
        print(f"tetrafill-figs: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"tetrafill-figs: error: {err}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
