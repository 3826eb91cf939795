import argparse

from muskit.cli.dependencies import EXIT_OK, add_input_argument, dump_json, load_formula
from muskit.schemas.cli import GlobalConfig
from muskit.services.heuristics import build_bundle


def register(subparsers) -> None:
    parser = subparsers.add_parser("info", help="print the heuristic bundle as JSON")
    add_input_argument(parser)
    parser.add_argument("--timeout", type=float, default=None, help="budget for the bundle")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    formula = load_formula(args.cnf)
    bundle = build_bundle(formula, timeout=config.timeout)
    payload = {
        "nvars": formula.nvars,
        "ncl": formula.ncl,
        "components": [sorted(c) for c in bundle.components],
        "kernel": sorted(bundle.union_overapprox),
        "card_bounds": list(bundle.card_bounds),
        "mcses": [sorted(m) for m in bundle.mcses],
        "summary": bundle.summary().model_dump(),
    }
    dump_json(payload)
    return EXIT_OK
