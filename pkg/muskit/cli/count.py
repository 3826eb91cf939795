import argparse

from muskit.cli.dependencies import EXIT_INCOMPLETE, EXIT_OK, add_common_arguments, add_heuristic_arguments, add_input_argument
from muskit.cli.solve import enumerate_for, report
from muskit.schemas.cli import GlobalConfig


def register(subparsers) -> None:
    parser = subparsers.add_parser("count", help="count MUSes (exact when complete)")
    add_input_argument(parser)
    add_common_arguments(parser)
    add_heuristic_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    result = enumerate_for(args, config)
    report(result, config, count_only=True)
    return EXIT_OK if result.complete else EXIT_INCOMPLETE
