import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from muskit.core.config import settings
from muskit.cli import bench, count, encode, generate, info, oracle, solve
from muskit.cli.dependencies import EXIT_INPUT_ERROR, apply_config, build_config

COMMANDS = (encode, solve, count, info, oracle, bench, generate)

logger = logging.getLogger(__name__)


def configure_logging(level: str) -> None:
    muskit_logger = logging.getLogger("muskit")
    muskit_logger.setLevel(level)
    if not muskit_logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        muskit_logger.addHandler(handler)
    muskit_logger.propagate = False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muskit", description="Enumerate and count minimal unsatisfiable subsets of CNF formulas")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT_ERROR

    configure_logging("DEBUG" if args.verbose else "WARNING" if args.quiet else settings.LOG_LEVEL)
    try:
        config = build_config(args)
        apply_config(config)
        return args.handler(args, config)
    except (ValueError, ValidationError, OSError) as e:
        logger.debug("Input error", exc_info=True)
        print(f"muskit {args.command}: error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
