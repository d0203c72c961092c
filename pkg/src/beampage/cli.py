"""Command-line entry point.

Subcommands:
  analytic  - evaluate the closed-form activation model over a grid
  verify    - analytic model vs seeded Monte Carlo, with z-scores
  simulate  - one simulation config, replicated over seeds
  sweep     - density or beam-count sweep over a scheme set
  compare   - percentage reductions versus a baseline scheme

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .accounting import ConfigurationError
from .config import PROFILES, build_spec, load_config
from .experiments import compare_to_baseline, read_results_csv, run_experiment


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML config file")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--profile", choices=sorted(PROFILES), help="run-length profile (default desk)")
    parser.add_argument("--out", type=Path, help="output directory (default results)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beampage",
        description="Paging-scheme simulator and analytic toolkit for multi-beam cells",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form activation model over a grid")
    _add_common(p)

    p = sub.add_parser("verify", help="analytic model against Monte Carlo")
    _add_common(p)

    p = sub.add_parser("simulate", help="run one simulation config")
    _add_common(p)
    p.add_argument("--scheme", help="paging scheme, e.g. legacy or mfep-md:4/2/0")
    p.add_argument("--replications", type=int, help="seeds per config")
    p.add_argument("--trace", action="store_true", help="write per-cycle trace CSVs")

    p = sub.add_parser("sweep", help="sweep density or beam count over schemes")
    _add_common(p)
    p.add_argument("--scheme", help="restrict to one scheme")
    p.add_argument("--axis", choices=("ue_density", "total_beams"), help="sweep axis")
    p.add_argument("--values", help="comma-separated sweep values")
    p.add_argument("--replications", type=int, help="seeds per config")
    p.add_argument("--trace", action="store_true", help="write per-cycle trace CSVs")

    p = sub.add_parser("compare", help="reductions versus a baseline scheme")
    p.add_argument("--results", type=Path, required=True, help="results CSV to read")
    p.add_argument("--baseline", required=True, help="baseline scheme name")
    p.add_argument("--metric", help="metric to compare (defaults by baseline)")
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    return parser


def _run_compare(args: argparse.Namespace) -> int:
    rows = read_results_csv(args.results)
    out_path = Path(args.out) / "compare.csv"
    reductions = compare_to_baseline(rows, args.baseline, metric=args.metric, out_path=out_path)
    for r in sorted(reductions, key=lambda r: (r.config_key(), r.scheme)):
        print(
            f"{r.scheme:>16s}  B={r.total_beams:<4d} density={r.ue_density:<6g} "
            f"{r.metric} = {r.value:7.2f}%"
        )
    print(f"wrote {out_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compare":
            return _run_compare(args)
        config_data = load_config(args.config) if args.config else None
        values = None
        if getattr(args, "values", None):
            values = [float(v) for v in str(args.values).split(",") if v.strip()]
        spec = build_spec(
            mode=args.command,
            config_data=config_data,
            out_dir=args.out,
            seed=args.seed,
            profile=args.profile,
            scheme=getattr(args, "scheme", None),
            jobs=args.jobs,
            trace=getattr(args, "trace", False),
            sweep_axis=getattr(args, "axis", None),
            sweep_values=values,
            replications=getattr(args, "replications", None),
        )
        path, table = run_experiment(spec)
        for line in table:
            print(line)
        print(f"wrote {path}")
        return 0
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
