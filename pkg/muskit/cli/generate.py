import argparse
from pathlib import Path

from muskit.cli.dependencies import EXIT_OK
from muskit.schemas.cli import GlobalConfig
from muskit.services.generators import generate_corpus


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="write a benchmark family as DIMACS files")
    parser.add_argument("family", choices=["random", "coloring"])
    parser.add_argument("--count", type=int, default=20)
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--nvars", type=int, default=6)
    parser.add_argument("--nclauses", type=int, default=24)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--nodes", type=int, default=6)
    parser.add_argument("--edge-prob", type=float, default=0.6)
    parser.add_argument("--colors", type=int, default=3)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config: GlobalConfig) -> int:
    paths = generate_corpus(
        args.family,
        args.count,
        args.out,
        seed=config.seed,
        nvars=args.nvars,
        nclauses=args.nclauses,
        k=args.k,
        nodes=args.nodes,
        edge_prob=args.edge_prob,
        colors=args.colors,
    )
    for path in paths:
        print(path)
    return EXIT_OK
