"""Benchmark families: uniform random k-CNF and graph colouring."""
import logging
import random
from itertools import combinations
from pathlib import Path
from typing import List, Optional

from muskit.models.cnf import CnfFormula
from muskit.services.cnf import write_dimacs

logger = logging.getLogger(__name__)


def random_kcnf(nvars: int, nclauses: int, k: int, rng: random.Random) -> CnfFormula:
    """Clauses of k distinct variables with random signs."""
    if not 1 <= k <= nvars:
        raise ValueError(f"Clause width {k} must lie in 1..{nvars}")
    clauses = []
    for _ in range(nclauses):
        variables = rng.sample(range(1, nvars + 1), k)
        clauses.append([v if rng.random() < 0.5 else -v for v in variables])
    return CnfFormula.from_clauses(clauses, nvars=nvars)


def graph_coloring(nodes: int, edge_prob: float, colors: int, rng: random.Random) -> CnfFormula:
    """Colour a G(n, p) random graph; variable (v, c) is v * colors + c + 1."""
    if nodes < 1 or colors < 1:
        raise ValueError("Need at least one node and one colour")

    def var(v: int, c: int) -> int:
        return v * colors + c + 1

    clauses: List[List[int]] = []
    for v in range(nodes):
        clauses.append([var(v, c) for c in range(colors)])
        clauses.extend([-var(v, a), -var(v, b)] for a, b in combinations(range(colors), 2))
    for u, v in combinations(range(nodes), 2):
        if rng.random() < edge_prob:
            clauses.extend([-var(u, c), -var(v, c)] for c in range(colors))
    return CnfFormula.from_clauses(clauses, nvars=nodes * colors)


def generate_corpus(
    family: str,
    count: int,
    out_dir: Path,
    seed: int = 0,
    nvars: int = 6,
    nclauses: int = 24,
    k: int = 3,
    nodes: int = 6,
    edge_prob: float = 0.6,
    colors: int = 3,
) -> List[Path]:
    rng = random.Random(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for n in range(count):
        if family == "random":
            formula = random_kcnf(nvars, nclauses, k, rng)
        elif family == "coloring":
            formula = graph_coloring(nodes, edge_prob, colors, rng)
        else:
            raise ValueError(f"Unknown benchmark family '{family}'")
        path = out_dir / f"{family}-{n:03d}.cnf"
        write_dimacs(path, formula)
        paths.append(path)
    logger.info(f"Wrote {count} {family} instances to {out_dir}")
    return paths
