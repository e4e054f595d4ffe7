import argparse
import sys
from typing import List, Optional

from app.cli.commands import (
    cmd_build,
    cmd_decide,
    cmd_difftest,
    cmd_empty,
    cmd_member,
    cmd_validate,
)
from app.cli.suites import SUITES
from app.config.settings import get_settings, load_settings, override_settings
from app.models.result import CommandOutcome
from app.utils.error_handling import setup_global_exception_handler
from app.utils.logger import configure_logging, get_logger

# Initialize logger
logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per command function."""
    settings = get_settings()
    parser = argparse.ArgumentParser(
        description="Omega-automatic structures: automata engines, presentations and first-order decisions",
        epilog="Exit codes: 0 ok, 1 a check failed, 2 bad input or budget exceeded.",
    )
    parser.add_argument("--config", help="Configuration file (default: config/default.toml)")
    parser.add_argument("--seed", type=int, help=f"Seed for sampled checks (default: {settings.sampling.seed})")
    parser.add_argument(
        "--budget", type=int, help=f"State budget per construction (default: {settings.automata.state_budget})"
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default=None, help=f"Output format (default: {settings.cli.format})"
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    subparsers = parser.add_subparsers(dest="command", required=True, help="Command to execute")

    member = subparsers.add_parser("member", help="Decide membership of a lasso or regular tree")
    member.add_argument("automaton", help="Automaton file")
    member.add_argument("element", help="Lasso or rtree file")

    empty = subparsers.add_parser("empty", help="Decide emptiness and write a witness")
    empty.add_argument("automaton", help="Automaton file")
    empty.add_argument("--witness", help="Witness output file")

    validate = subparsers.add_parser("validate", help="Validate a presentation bundle")
    validate.add_argument("presentation", help="Presentation directory")
    validate.add_argument("--samples", type=int, help="Tuples per sampled check")
    validate.add_argument("--catalogue", action="store_true", help="Also run the boolean-algebra instance catalogue")

    decide = subparsers.add_parser("decide", help="Decide a first-order sentence")
    decide.add_argument("presentation", help="Presentation directory")
    decide.add_argument("sentence", help="Sentence text, or a .fo/.txt file holding it")

    build = subparsers.add_parser("build", help="Materialize a named construction")
    build.add_argument("name", nargs="?", help="Builder name")
    build.add_argument("parameter", nargs="?", type=int, help="Builder parameter (k or n)")
    build.add_argument("-o", "--output", help="Output file or bundle directory")
    build.add_argument("--list", action="store_true", help="List the builders")

    difftest = subparsers.add_parser("difftest", help="Run a differential-test suite")
    difftest.add_argument("suite", choices=sorted(SUITES), help="Suite name")
    difftest.add_argument("--count", type=int, help="Number of cases (default: per suite)")
    difftest.add_argument(
        "--seed", type=int, default=argparse.SUPPRESS, help="Seed for this suite (default: the global --seed)"
    )

    return parser


def dispatch(args: argparse.Namespace) -> CommandOutcome:
    if args.command == "member":
        return cmd_member(args.automaton, args.element)
    if args.command == "empty":
        return cmd_empty(args.automaton, args.witness)
    if args.command == "validate":
        return cmd_validate(args.presentation, seed=args.seed, samples=args.samples, catalogue=args.catalogue)
    if args.command == "decide":
        return cmd_decide(args.presentation, args.sentence)
    if args.command == "build":
        if args.list or args.name is None:
            return cmd_build(None)
        return cmd_build(args.name, args.output, args.parameter)
    return cmd_difftest(args.suite, seed=args.seed, count=args.count)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.config:
        try:
            load_settings(args.config)
        except Exception as e:
            print(CommandOutcome.error_outcome("Invalid configuration", str(e)).render(args.format or "text"))
            return 2
    settings = override_settings(state_budget=args.budget, seed=args.seed)

    configure_logging(args.verbose)
    setup_global_exception_handler()

    outcome = dispatch(args)
    print(outcome.render(args.format or settings.cli.format))
    if not outcome.is_ok:
        logger.info(f"{args.command} finished with status {outcome.status}: {outcome.reason}")
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
