"""Command-line entry point.

    tetrafill <campaign> --j 3/2 --ensemble CoherentClosed --samples 1000 \
        --seed 7 --out results/

A flat key=value config file can preseed any flag; explicit flags win.
Exit status: 0 on success, 1 on usage errors, 2 when too many rows failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ExcessFailures
from .experiments import CAMPAIGNS, CampaignConfig, run_campaign
from .sampling import EnsembleKind
from .su2 import Spin

_DEFAULTS = {
    "j": "1/2",
    "ensemble": None,
    "samples": 1000,
    "bins": 1000,
    "seed": 0,
    "grid": "300x300",
    "base": "regular",
    "tolerance": 1e-10,
    "max_restarts": 32,
    "out": "out",
    "workers": 1,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="tetrafill", description=__doc__.strip().splitlines()[0])
    parser.add_argument("campaign", choices=CAMPAIGNS)
    parser.add_argument("--config", help="flat key=value file preseeding the flags below")
    parser.add_argument("--j", help='spin as "3/2" or "1.5" (j_max for means-vs-j)')
    parser.add_argument("--ensemble", choices=[k.value for k in EnsembleKind])
    parser.add_argument("--samples", type=int)
    parser.add_argument("--bins", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grid", help="AxB grid resolution, e.g. 300x300")
    parser.add_argument("--base", choices=["regular", "disphenoid"])
    parser.add_argument("--tolerance", type=float)
    parser.add_argument("--max-restarts", type=int, dest="max_restarts")
    parser.add_argument("--out")
    parser.add_argument("--workers", type=int)
    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _parse_grid(text: str):
    try:
        a, _, b = text.lower().partition("x")
        return int(a), int(b)
    except ValueError:
        raise ValueError(f"bad grid {text!r}, expected AxB") from None


def build_config(argv) -> CampaignConfig:
    parser = _build_parser()
    args = parser.parse_args(argv)

    merged = dict(_DEFAULTS)
    if args.config:
        file_values = _read_config_file(args.config)
        unknown = set(file_values) - set(_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_values)
    for key in _DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value

    grid_a, grid_b = _parse_grid(str(merged["grid"]))
    ensemble = merged["ensemble"]
    return CampaignConfig(
        campaign=args.campaign,
        j=Spin.parse(merged["j"]),
        ensemble=EnsembleKind(ensemble) if ensemble else None,
        samples=int(merged["samples"]),
        bins=int(merged["bins"]),
        seed=int(merged["seed"]),
        grid_a=grid_a,
        grid_b=grid_b,
        base=str(merged["base"]),
        tolerance=float(merged["tolerance"]),
        max_restarts=int(merged["max_restarts"]),
        output_dir=Path(merged["out"]),
        workers=int(merged["workers"]),
    )


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = build_config(argv)
    except SystemExit as exit_:  # argparse: 1 on usage error, 0 on --help
        return int(exit_.code or 0)
    except (ValueError, OSError) as err:
        print(f"tetrafill: error: {err}", file=sys.stderr)
        return 1
    try:
        files = run_campaign(config)
    except ExcessFailures as err:
        print(f"tetrafill: {err}", file=sys.stderr)
        return 2
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
