import argparse
import logging
from pathlib import Path

from muskit.cli.dependencies import EXIT_OK, add_heuristic_arguments, add_input_argument, load_formula, note
from muskit.schemas.cli import GlobalConfig
from muskit.schemas.encoding import EncodingOptions, HeuristicFlags
from muskit.services.encoder import SOLVER_INVOCATION, build_program, emit_aspcore2
from muskit.services.heuristics import build_bundle

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("encode", help="write the ASP program whose answer sets are the cores")
    add_input_argument(parser)
    parser.add_argument("-o", "--output", type=Path, default=None, help="target .lp file (default: stdout)")
    add_heuristic_arguments(parser)
    parser.add_argument("--timeout", type=float, default=None, help="budget for the heuristic bundle")
    parser.add_argument("--no-show", action="store_true", help="omit #show directives")
    parser.add_argument("--no-domain-heuristic", action="store_true", help="omit #heuristic directives")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    formula = load_formula(args.cnf)
    flags = config.heuristics or HeuristicFlags()
    bundle = build_bundle(formula, flags, config.timeout) if flags.any() else None
    opts = EncodingOptions(
        heuristics_enabled=flags,
        bundle=bundle,
        emit_show_directive=not args.no_show,
        emit_domain_heuristic=not args.no_domain_heuristic,
    )
    text = emit_aspcore2(build_program(formula, opts), opts)
    if args.output is None:
        print(text, end="")
    else:
        args.output.write_text(text)
        logger.info(f"Wrote {args.output}")
    note(f"enumerate minimal cores with: {SOLVER_INVOCATION} <program.lp>")
    return EXIT_OK
