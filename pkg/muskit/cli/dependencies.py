"""Shared argument handling for the subcommands."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from muskit.core.config import settings
from muskit.models.cnf import CnfFormula
from muskit.schemas.cli import GlobalConfig
from muskit.schemas.encoding import PRESETS, Heuristic, HeuristicFlags
from muskit.services.cnf import read_dimacs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INCOMPLETE = 10


def add_input_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("cnf", type=Path, help="DIMACS CNF file")


def add_heuristic_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("heuristics")
    for h in Heuristic:
        group.add_argument(f"--{h.value}", action="store_true", help=f"enable {h.value.upper()}")
    group.add_argument("--heuristics", choices=list(PRESETS), help="preset instead of single flags")


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--timeout", type=float, default=None, help="wall-clock budget in seconds")
    parser.add_argument("--threshold", type=int, default=None, help="hybrid clause threshold")
    parser.add_argument("--format", dest="output_format", choices=["human", "json"], default="human")
    parser.add_argument("--seed", type=int, default=None, help="determinism seed (default: MUSKIT_SEED)")


def heuristic_flags(args: argparse.Namespace) -> Optional[HeuristicFlags]:
    preset = getattr(args, "heuristics", None)
    chosen = [h for h in Heuristic if getattr(args, h.value, False)]
    if preset and chosen:
        raise ValueError("--heuristics cannot be combined with single --hN flags")
    if preset:
        return HeuristicFlags.preset(preset)
    if chosen:
        return HeuristicFlags.of(chosen)
    return None


def build_config(args: argparse.Namespace) -> GlobalConfig:
    seed = getattr(args, "seed", None)
    threshold = getattr(args, "threshold", None)
    return GlobalConfig(
        timeout=getattr(args, "timeout", None),
        heuristics=heuristic_flags(args),
        threshold=threshold if threshold is not None else settings.HYBRID_CLAUSE_THRESHOLD,
        output_format=getattr(args, "output_format", "human"),
        seed=seed if seed is not None else settings.SEED,
        asp_cap=settings.ASP_BRUTE_FORCE_CAP,
        oracle_cap=settings.ORACLE_BRUTE_FORCE_CAP,
    )


def apply_config(config: GlobalConfig) -> None:
    """Engines read the seed from settings."""
    settings.SEED = config.seed


def load_formula(path: Path) -> CnfFormula:
    formula = read_dimacs(path)
    logger.info(f"Loaded {path}: {formula.nvars} variables, {formula.ncl} clauses")
    return formula


def dump_json(payload: Any, target: Optional[str] = None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if target is None or target == "-":
        print(text)
    else:
        Path(target).write_text(text + "\n")
        logger.info(f"Wrote {target}")


def note(message: str) -> None:
    print(message, file=sys.stderr)
