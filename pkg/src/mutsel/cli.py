"""Command line entry point.

    mutsel <subcommand> --config <path> [--out <dir>] [--seed <n>]

Subcommands map onto harness scenarios; `entropy` additionally takes
--traj with a recorded snapshot CSV. Exit code 0 iff every verdict in
the report passes. MUTSEL_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig
from .errors import MutselError
from .harness import run

SUBCOMMANDS = {
    "eig": "eig",
    "gap": "gap",
    "simulate": "simulate",
    "steady": "steady",
    "entropy": "entropy_check",
    "sweep": "epsilon_sweep",
    "convergence": "convergence_study",
    "dichotomy": "dichotomy",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mutsel",
                                     description="mutation-selection numerical laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if name == "entropy":
            p.add_argument("--traj", default=None, help="snapshot CSV from `simulate`")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig.from_file(args.config)
    scenario = cfg.get_str("scenario", SUBCOMMANDS[args.command])
    if scenario != SUBCOMMANDS[args.command]:
        print(f"error: config declares scenario {scenario!r}, "
              f"subcommand expects {SUBCOMMANDS[args.command]!r}", file=sys.stderr)
        return 2
    # re-parse so the scenario key is consumed uniformly inside run()
    cfg = ExperimentConfig.from_file(args.config)
    if not cfg.has("scenario"):
        cfg = ExperimentConfig.from_text(
            cfg_text_with_scenario(args.config, SUBCOMMANDS[args.command]), args.config)
    try:
        report = run(cfg, out_dir=args.out, seed=args.seed,
                     traj_path=getattr(args, "traj", None))
    except MutselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed() else 1


def cfg_text_with_scenario(path: str, scenario: str) -> str:
    from pathlib import Path

    return Path(path).read_text() + f"\nscenario = {scenario}\n"


if __name__ == "__main__":
    raise SystemExit(main())
