import argparse
import asyncio
import logging
from pathlib import Path

from muskit.cli.dependencies import EXIT_OK, dump_json
from muskit.schemas.cli import GlobalConfig
from muskit.services.bench import (
    build_scoreboard,
    discover_instances,
    load_configs,
    run_bench,
    write_records_csv,
    write_scoreboard,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="run configurations over a CNF directory")
    parser.add_argument("directory", type=Path, help="directory of .cnf instances")
    parser.add_argument("--configs", type=Path, required=True, help="JSON file listing named configs")
    parser.add_argument("--timeout", type=float, default=60.0, help="per-run budget in seconds")
    parser.add_argument("--jobs", type=int, default=1, help="parallel runs")
    parser.add_argument("--out", type=Path, required=True, help="run directory for runs.csv and scoreboard.json")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    if args.jobs < 1:
        raise ValueError("--jobs must be at least 1")
    instances = discover_instances(args.directory)
    configs = load_configs(args.configs)
    logger.info(f"Benchmark: {len(instances)} instances x {len(configs)} configs, jobs={args.jobs}")
    records = asyncio.run(run_bench(instances, configs, config.timeout, jobs=args.jobs))
    board = build_scoreboard(records)
    write_records_csv(args.out / "runs.csv", records)
    write_scoreboard(args.out / "scoreboard.json", board)
    dump_json(board.model_dump())
    return EXIT_OK
