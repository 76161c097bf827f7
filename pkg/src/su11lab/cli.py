"""Command-line entry point: ``su11lab {sweep,fig2a,fig2b,fig2c,tables,verify}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .sweep import PRESETS, ConfigError, load_config, run_sweep, to_csv, write_outputs
from .tables import format_report, run_tables
from .verify import GRIDS, run_verify


def _emit_sweep(config, jobs: int) -> int:
    rows = run_sweep(config, jobs=jobs)
    if config.output:
        write_outputs(config, rows, config.output)
        print(f"wrote {len(rows)} rows to {config.output}", file=sys.stderr)
    else:
        sys.stdout.write(to_csv(rows))
    return 0


def _cmd_sweep(args) -> int:
    try:
        config = load_config(args.config, args.set)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        config = replace(config, output=str(args.out))
    return _emit_sweep(config, args.jobs)


def _cmd_preset(args) -> int:
    config = PRESETS[args.command]
    if args.out:
        config = replace(config, output=str(args.out))
    return _emit_sweep(config, args.jobs)


def _cmd_tables(args) -> int:
    reports = run_tables()
    text = format_report(reports) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 1 if any(r.verdict == "FAIL" for r in reports) else 0


def _cmd_verify(args) -> int:
    report = run_verify(args.grid)
    print("\n".join(report.lines()))
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="su11lab", description="Phase sensitivity of SU(1,1) and Mach-Zehnder interferometers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a parameter sweep described by a key=value config file")
    p.add_argument("config", type=Path)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key (repeatable)")
    p.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=_cmd_sweep)

    for name in PRESETS:
        p = sub.add_parser(name, help=f"run the {name} preset sweep")
        p.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.set_defaults(func=_cmd_preset)

    p = sub.add_parser("tables", help="compare the bound catalogue with numeric values")
    p.add_argument("--out", type=Path, help="also write the report to this file")
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("verify", help="cross-check the Gaussian pipeline against the Fock simulation")
    p.add_argument("--grid", choices=sorted(GRIDS), default="default")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
