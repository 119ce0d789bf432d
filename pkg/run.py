"""
Main entrypoint for the sweeping-process laboratory.
Usage: python run.py [run|converge|crowd|field] --scenario FILE --out DIR [--seed S] [--n N]
       python run.py verify SUITE [--out DIR] [--seed S]
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path

project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from sweeping_lab.analysis.suites import ALL_SUITES, SUITES  # noqa: E402
from sweeping_lab.cli.service import EXIT_INVALID, execute  # noqa: E402
from sweeping_lab.cli.settings import cli_settings  # noqa: E402

SCENARIO_COMMANDS = {
    "run": "Integrate a scenario and audit every step",
    "converge": "Convergence study over the scenario's n_list",
    "crowd": "Simulate a crowd scenario with both schemes",
    "field": "Solve the distance-to-exit field of the scenario's room",
}


def setup_logging() -> None:
    """
    Set up consistent logging configuration for the application.
    Uses CliSettings, hence SWEEP_LOG_* environment variables and .env.
    """
    numeric_level = getattr(logging, cli_settings.log_level.upper(), logging.INFO)

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stdout)]

    if cli_settings.log_to_file:
        log_path = Path(cli_settings.log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path))

    logging.basicConfig(
        level=numeric_level,
        format=cli_settings.log_format,
        handlers=handlers,
        force=True,  # Override any existing configuration
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run.py", description="Numerical laboratory for sweeping processes"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, help_text in SCENARIO_COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--scenario", required=True, help="Scenario JSON file")
        sub.add_argument("--out", default=cli_settings.default_out, help="Output directory")
        sub.add_argument("--seed", type=int, help="Override the scenario seed")
        sub.add_argument("--n", type=int, help="Override the scenario number of steps")

    verify = subparsers.add_parser("verify", help="Run a verification suite")
    verify.add_argument(
        "suite",
        nargs="?",
        help=f"One of {', '.join([*SUITES, ALL_SUITES])}",
    )
    verify.add_argument("--suite", dest="suite_option", help="Same as the positional suite")
    verify.add_argument("--out", help="Write verify.json here instead of printing the report")
    verify.add_argument("--seed", type=int, default=0, help="Seed of the random samples")
    return parser


logger = logging.getLogger(__name__)


async def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else 0

    setup_logging()
    logger.info(f"Starting {args.command}...")

    if args.command == "verify":
        return await execute(
            "verify",
            out_dir=args.out,
            seed=args.seed,
            suite=args.suite or args.suite_option,
        )
    return await execute(
        args.command,
        scenario_path=args.scenario,
        out_dir=args.out,
        seed=args.seed,
        n=args.n,
    )


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        print("\nInterrupted by user")
        sys.exit(130)
