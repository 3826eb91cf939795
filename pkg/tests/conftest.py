import logging
import random
from itertools import product
from typing import Iterable, List

import pytest

from muskit.models.cnf import CnfFormula
from muskit.services.cnf import parse_dimacs


EXAMPLE1_DIMACS = "p cnf 2 4\n1 0\n-1 0\n2 0\n-1 -2 0\n"
EXAMPLE1_MUSES = {frozenset({1, 2}), frozenset({1, 3, 4})}
EXAMPLE1_MCSES = {frozenset({1}), frozenset({2, 3}), frozenset({2, 4})}


def truth_table_sat(formula: CnfFormula, indices: Iterable[int]) -> bool:
    clauses = [formula.clause(i).literals for i in indices]
    variables = sorted({abs(lit) for c in clauses for lit in c})
    for values in product((False, True), repeat=len(variables)):
        tau = dict(zip(variables, values))
        if all(any(tau[abs(lit)] == (lit > 0) for lit in c) for c in clauses):
            return True
    return False


def brute_force_cores(formula: CnfFormula) -> set[frozenset[int]]:
    cores = set()
    for mask in range(1 << formula.ncl):
        subset = [i for i in formula.indices if mask >> (i - 1) & 1]
        if not truth_table_sat(formula, subset):
            cores.add(frozenset(subset))
    return cores


def brute_force_muses(formula: CnfFormula) -> set[frozenset[int]]:
    cores = brute_force_cores(formula)
    return {c for c in cores if not any(d < c for d in cores)}


def brute_force_mcses(formula: CnfFormula) -> set[frozenset[int]]:
    everything = frozenset(formula.indices)
    sat = set(_all_subsets(everything)) - brute_force_cores(formula)
    maximal = {s for s in sat if not any(s < t for t in sat)}
    return {everything - s for s in maximal if s != everything}


def _all_subsets(items: frozenset[int]) -> List[frozenset[int]]:
    ordered = sorted(items)
    return [frozenset(x for k, x in enumerate(ordered) if mask >> k & 1) for mask in range(1 << len(ordered))]


def random_formula(rng: random.Random, nvars: int, ncl: int, max_width: int = 3) -> CnfFormula:
    clauses = []
    for _ in range(ncl):
        width = rng.randint(1, min(max_width, nvars))
        variables = rng.sample(range(1, nvars + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in variables])
    return CnfFormula.from_clauses(clauses, nvars=nvars)


def build_corpus(seed: int, count: int, nvars: tuple, ncl: tuple, unsat_only: bool = False, max_width: int = 3):
    rng = random.Random(seed)
    corpus = []
    attempts = 0
    while len(corpus) < count:
        attempts += 1
        if attempts > 200 * count:
            raise RuntimeError("Corpus generator could not find enough formulas")
        formula = random_formula(rng, rng.randint(*nvars), rng.randint(*ncl), max_width)
        if unsat_only and truth_table_sat(formula, formula.indices):
            continue
        corpus.append(formula)
    return corpus


@pytest.fixture(autouse=True)
def reset_muskit_logger():
    yield
    muskit_logger = logging.getLogger("muskit")
    muskit_logger.handlers = []
    muskit_logger.propagate = True
    muskit_logger.setLevel(logging.NOTSET)


@pytest.fixture
def example1():
    return parse_dimacs(EXAMPLE1_DIMACS)


@pytest.fixture
def example1_path(tmp_path):
    path = tmp_path / "example1.cnf"
    path.write_text(EXAMPLE1_DIMACS)
    return path


@pytest.fixture
def sat_path(tmp_path):
    path = tmp_path / "sat.cnf"
    path.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    return path


@pytest.fixture(scope="session")
def small_corpus():
    """Mixed satisfiable/unsatisfiable formulas: 2-4 variables, 2-6 clauses."""
    return build_corpus(seed=2024, count=500, nvars=(2, 4), ncl=(2, 6), max_width=2)


@pytest.fixture(scope="session")
def unsat_corpus():
    return build_corpus(seed=7, count=100, nvars=(2, 4), ncl=(3, 6), unsat_only=True, max_width=2)


@pytest.fixture(scope="session")
def scaleup_corpus():
    return build_corpus(seed=99, count=200, nvars=(3, 6), ncl=(4, 12), max_width=3)
