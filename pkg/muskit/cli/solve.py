import argparse
import logging

from muskit.cli.dependencies import (
    EXIT_INCOMPLETE,
    EXIT_OK,
    add_common_arguments,
    add_heuristic_arguments,
    add_input_argument,
    dump_json,
    load_formula,
    note,
)
from muskit.schemas.cli import GlobalConfig
from muskit.schemas.encoding import EncodingOptions
from muskit.schemas.enumeration import Engine, EnumerationBudget, EnumerationResult, HybridPolicy
from muskit.services.enumerate import (
    asp_route_enumerate,
    bundled_seed_shrink,
    hybrid_enumerate,
    oracle_enumerate,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="enumerate MUSes")
    add_input_argument(parser)
    add_common_arguments(parser)
    add_heuristic_arguments(parser)
    parser.add_argument("--count", action="store_true", help="print only the count")
    parser.add_argument("--json", dest="json_out", default=None, metavar="OUT", help="write the JSON result ('-' for stdout)")
    parser.add_argument("--max-muses", type=int, default=None, help="stop after this many MUSes")
    parser.add_argument(
        "--engine",
        choices=[e.value for e in Engine],
        default=Engine.HYBRID.value,
        help="hybrid dispatch (default) or a fixed engine",
    )
    parser.set_defaults(handler=run)


def enumerate_for(args: argparse.Namespace, config: GlobalConfig) -> EnumerationResult:
    formula = load_formula(args.cnf)
    budget = EnumerationBudget(timeout=config.timeout, max_muses=getattr(args, "max_muses", None))
    engine = Engine(getattr(args, "engine", Engine.HYBRID.value))
    opts = EncodingOptions(heuristics_enabled=config.heuristics) if config.heuristics else None
    if engine is Engine.ORACLE:
        return oracle_enumerate(formula, config.oracle_cap)
    if engine is Engine.ASP_ROUTE:
        return asp_route_enumerate(formula, opts, config.asp_cap, config.timeout)
    if engine is Engine.SEED_SHRINK:
        return bundled_seed_shrink(formula, opts, budget)
    return hybrid_enumerate(formula, HybridPolicy(clause_threshold=config.threshold), opts, budget)


def _field(value) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return str(value).lower() if isinstance(value, bool) else str(value)


def report(result: EnumerationResult, config: GlobalConfig, count_only: bool = False) -> None:
    if result.complete and result.count == 0:
        note("formula is satisfiable: no MUSes")
    if not result.complete:
        note(f"enumeration incomplete: {result.count} MUSes found before the budget ran out")
    if config.output_format == "json":
        dump_json(result.payload())
        return
    if count_only:
        print(result.count)
        return
    for mus in result.muses:
        print("mus", *mus)
    print(f"engine {result.engine.value}")
    if result.bundle_summary is not None:
        summary = result.bundle_summary.model_dump(exclude_none=True)
        print("bundle", *(f"{key}={_field(value)}" for key, value in summary.items()))
    print(f"count {result.count}")
    print(f"complete {str(result.complete).lower()}")
    print(f"elapsed_ms {result.elapsed * 1000:.3f}")


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    result = enumerate_for(args, config)
    report(result, config, count_only=args.count)
    if args.json_out and args.json_out != "-":
        dump_json(result.payload(), args.json_out)
    elif args.json_out == "-" and config.output_format != "json":
        dump_json(result.payload())
    return EXIT_OK if result.complete else EXIT_INCOMPLETE
