"""Command-line front door.

Subcommands: exponent, sharpness-scan, phase-diagram, convergence,
kernel-probe, domination.  Every subcommand accepts --config PATH (flat
key=value file), repeated --set key=value overrides, --out PATH and
--format csv|json.  Writing a CSV to --out also writes a JSON summary
alongside it (<out>.summary.json).  Exit codes: 0 success, 1 internal
checks failed, 2 hard error (bad config / violated precondition).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, RunConfig
from .experiments import (
    SweepResult,
    convergence_sweep,
    domination_report,
    exponent_rows,
    kernel_probe_report,
    phase_diagram_rows,
    sharpness_scan,
)
from .serialize import json_dumps

_COMMANDS = {
    "exponent": (exponent_rows, "csv"),
    "sharpness-scan": (sharpness_scan, "csv"),
    "phase-diagram": (phase_diagram_rows, "csv"),
    "convergence": (convergence_sweep, "csv"),
    "kernel-probe": (lambda cfg: kernel_probe_report(cfg)[0], "json"),
    "domination": (lambda cfg: domination_report(cfg)[0], "json"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctdisp",
        description="complex-time dispersive propagator experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument(
            "--set", action="append", default=[], metavar="KEY=VALUE",
            help="override a single config key (repeatable)",
        )
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.set:
        cfg = cfg.with_overrides(args.set)
    return cfg


def _emit(result: SweepResult, args, default_format: str) -> None:
    fmt = args.format or default_format
    payload = result.csv if fmt == "csv" else json_dumps(result.summary)
    if args.out:
        out = Path(args.out)
        out.write_text(payload, encoding="utf-8")
        if fmt == "csv":
            Path(str(out) + ".summary.json").write_text(
                json_dumps(result.summary), encoding="utf-8"
            )
    else:
        sys.stdout.write(payload)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    runner, default_format = _COMMANDS[args.command]
    try:
        cfg = _load_config(args)
        result = runner(cfg)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"ctdisp: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"ctdisp: {exc}", file=sys.stderr)
        return 2
    _emit(result, args, default_format)
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
