import argparse

from muskit.cli.dependencies import EXIT_OK, add_input_argument, dump_json, load_formula
from muskit.schemas.cli import GlobalConfig
from muskit.services.enumerate import oracle_report


def register(subparsers) -> None:
    parser = subparsers.add_parser("oracle", help="cores, MCSes and MUSes by exhaustive search (small inputs)")
    add_input_argument(parser)
    parser.add_argument("--format", dest="output_format", choices=["human", "json"], default="human")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    report = oracle_report(load_formula(args.cnf), config.oracle_cap)
    if config.output_format == "json":
        dump_json(report.model_dump())
        return EXIT_OK
    for label, sets in (("core", report.cores), ("mcs", report.mcses), ("mus", report.muses)):
        for s in sets:
            print(label, *s)
    print(f"cores {len(report.cores)} mcses {len(report.mcses)} muses {len(report.muses)}")
    return EXIT_OK
