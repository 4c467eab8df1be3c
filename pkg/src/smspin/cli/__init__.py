"""Command-line entry point: ``smspin {verify,sm-check,recover,scan}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ENV_VAR, ConfigError, RunConfig, load_config


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"TOML configuration (default: ${ENV_VAR}, then built-in defaults)")
    common.add_argument("--out", default=".", help="output directory (default: current directory)")
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--seed", type=int, help="override [run].seed")
    common.add_argument("--checks", help="comma separated check-name patterns; '' selects nothing")
    p = argparse.ArgumentParser(prog="smspin", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="identity suites (Clifford, geometry, field theory, transport, "
                                                    "certificate); writes report.json")
    sub.add_parser("sm-check", parents=[common], help="Standard-Model representation checks; writes report.json")
    sub.add_parser("recover", parents=[common], help="spinor recovery on a grid; writes recovery.json, report.json")
    sub.add_parser("scan", parents=[common], help="convergence table; writes scan.csv, report.json")
    return p


def resolve(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.jobs is not None and args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed must be non-negative")
    return cfg.with_overrides(seed=args.seed, jobs=args.jobs, checks=args.checks)


def main(argv=None) -> int:
    from .commands import COMMANDS, EXIT_CONFIG

    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg, Path(args.out))
    except ConfigError as exc:
        print(f"smspin: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


__all__ = ["main", "build_parser", "load_config", "RunConfig", "ConfigError"]
