"""Search-space heuristics for MUS enumeration.

Computes the artifacts behind H1-H5: the lean kernel (an over-approximation of
the union of MUSes), MUS cardinality bounds, the clause component partition, a
budgeted MCS collection and negative-literal cover rules. Every artifact is
safe: no MUS of the formula is excluded by it.
"""
import logging
import time
from dataclasses import dataclass
from itertools import chain
from typing import Iterable, List, Optional, Sequence, Tuple

from pysat.examples.hitman import Hitman

from muskit.core.config import settings
from muskit.core.satcore import SatBudget, SatInstance, SatSolver, SatStatus, at_most_outputs
from muskit.models.cnf import Assignment, CnfFormula
from muskit.schemas.encoding import Heuristic, HeuristicFlags
from muskit.schemas.heuristics import CoverRule, HeuristicBundle
from muskit.services.cnf import satisfied_clauses

logger = logging.getLogger(__name__)


class UnionFind:
    """Disjoint-set union with path compression and union by size."""

    def __init__(self, elements: Iterable[int]):
        self.parent = {e: e for e in elements}
        self.size = {e: 1 for e in self.parent}

    def find(self, e: int) -> int:
        root = e
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[e] != root:
            self.parent[e], e = root, self.parent[e]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self) -> List[frozenset[int]]:
        found: dict[int, list[int]] = {}
        for e in self.parent:
            found.setdefault(self.find(e), []).append(e)
        return sorted((frozenset(g) for g in found.values()), key=min)


def literal_occurrences(formula: CnfFormula) -> dict[int, list[int]]:
    occurrences: dict[int, list[int]] = {}
    for clause in formula.clauses:
        for lit in clause.literals:
            occurrences.setdefault(lit, []).append(clause.index)
    return occurrences


def components(formula: CnfFormula) -> List[frozenset[int]]:
    """Connected components of the graph linking clauses with complementary literals."""
    uf = UnionFind(formula.indices)
    occurrences = literal_occurrences(formula)
    for lit, holders in occurrences.items():
        if lit < 0:
            continue
        opposite = occurrences.get(-lit)
        if not opposite:
            continue
        anchor = holders[0]
        for j in chain(holders[1:], opposite):
            uf.union(anchor, j)
    return uf.groups()


def grow(instance: SatInstance, model: Assignment, budget: Optional[SatBudget] = None) -> Optional[frozenset[int]]:
    """Extend the clauses satisfied by `model` to a maximal satisfiable subset.

    Candidates are tried in index order; None when the budget runs out.
    """
    formula = instance.formula
    grown = satisfied_clauses(formula, model)
    for i in formula.indices:
        if i in grown:
            continue
        if budget is not None and budget.expired():
            return None
        step = instance.solve(grown | {i}, budget)
        if step.status is SatStatus.UNKNOWN:
            return None
        if step.is_sat:
            grown = satisfied_clauses(formula, step.model)
    return frozenset(grown)


@dataclass(frozen=True)
class McsCollection:
    mcses: List[frozenset[int]]
    complete: bool
    satisfiable: bool = False


def enumerate_mcs(
    formula: CnfFormula,
    timeout: Optional[float] = None,
    max_count: Optional[int] = None,
    budget: Optional[SatBudget] = None,
) -> McsCollection:
    """Enumerate MCSes as complements of maximal satisfiable subsets.

    Each round takes any assignment consistent with the blocking clauses, grows
    the satisfied clause set greedily in index order, and blocks the complement
    so that later satisfiable sets must contain one of its clauses.
    """
    budget = budget or SatBudget.from_timeout(timeout)
    max_count = settings.MCS_MAX_COUNT if max_count is None else max_count
    instance = SatInstance(formula)
    found: List[frozenset[int]] = []
    all_indices = frozenset(formula.indices)

    while True:
        outcome = instance.solve((), budget)
        if outcome.status is SatStatus.UNKNOWN:
            return McsCollection(found, complete=False)
        if outcome.is_unsat:
            logger.debug(f"MCS enumeration complete: {len(found)} MCSes")
            return McsCollection(found, complete=True)
        if len(found) >= max_count:
            logger.info(f"MCS collection stopped at step cap ({max_count})")
            return McsCollection(found, complete=False)

        grown = grow(instance, outcome.model, budget)
        if grown is None:
            return McsCollection(found, complete=False)

        mcs = all_indices - grown
        if not mcs:
            return McsCollection([], complete=True, satisfiable=True)
        found.append(mcs)
        logger.debug(f"MCS #{len(found)}: {sorted(mcs)}")
        instance.solver.add_clause(instance.selector(i) for i in sorted(mcs))


def union_overapprox(
    formula: CnfFormula,
    timeout: Optional[float] = None,
    budget: Optional[SatBudget] = None,
) -> frozenset[int]:
    """Lean kernel: clauses left after repeatedly removing everything an autarky touches."""
    budget = budget or SatBudget.from_timeout(timeout)
    remaining = set(formula.indices)
    rounds = 0
    while True:
        if budget.expired():
            logger.warning("Autarky search ran out of budget; kernel over-approximation is coarser")
            break
        variables = sorted({abs(lit) for i in remaining for lit in formula.clause(i).literals})
        if not variables:
            break
        solver = SatSolver(seed=settings.SEED)
        true_var = {v: solver.new_var() for v in variables}
        false_var = {v: solver.new_var() for v in variables}

        def satisfied_by(lit: int) -> int:
            return true_var[lit] if lit > 0 else false_var[-lit]

        def falsified_by(lit: int) -> int:
            return false_var[lit] if lit > 0 else true_var[-lit]

        for v in variables:
            solver.add_clause([-true_var[v], -false_var[v]])
        for i in sorted(remaining):
            lits = formula.clause(i).literals
            support = [satisfied_by(lit) for lit in lits]
            for lit in lits:
                solver.add_clause([-falsified_by(lit), *support])
        solver.add_clause(chain.from_iterable((true_var[v], false_var[v]) for v in variables))

        result = solver.solve(budget=budget)
        if result.status is SatStatus.UNKNOWN:
            logger.warning("Autarky search ran out of budget; kernel over-approximation is coarser")
            break
        if result.status is SatStatus.UNSAT:
            break
        assigned = {v for v in variables if result.model[true_var[v]] or result.model[false_var[v]]}
        touched = {i for i in remaining if any(abs(lit) in assigned for lit in formula.clause(i).literals)}
        remaining -= touched
        rounds += 1
        logger.debug(f"Autarky round {rounds}: removed {len(touched)} clauses")
    return frozenset(remaining)


def _minimal_sets(collection: Sequence[Iterable[int]]) -> List[frozenset[int]]:
    unique = sorted({frozenset(s) for s in collection}, key=lambda s: (len(s), sorted(s)))
    return [s for k, s in enumerate(unique) if not any(t < s for t in unique[:k])]


def minimum_hitting_set(collection: Sequence[Iterable[int]]) -> frozenset[int]:
    """Minimum-cardinality hitting set, computed as a MaxSAT optimum."""
    sets = _minimal_sets(collection)
    if not sets:
        return frozenset()
    if not sets[0]:
        raise ValueError("An empty set cannot be hit")
    with Hitman(bootstrap_with=[sorted(s) for s in sets], htype="sorted") as hitman:
        return frozenset(hitman.get())


def minimal_hitting_sets(collection: Sequence[Iterable[int]]) -> List[frozenset[int]]:
    """All minimal hitting sets, smallest first.

    Each optimum is blocked from above, so a later answer never contains an
    earlier one.
    """
    sets = _minimal_sets(collection)
    if not sets:
        return [frozenset()]
    if not sets[0]:
        return []
    found: List[frozenset[int]] = []
    with Hitman(bootstrap_with=[sorted(s) for s in sets], htype="sorted") as hitman:
        while (hs := hitman.get()) is not None:
            found.append(frozenset(hs))
            hitman.block(hs)
    return sorted(found, key=lambda h: (len(h), sorted(h)))


def max_satisfiable_count(
    formula: CnfFormula,
    budget: Optional[SatBudget] = None,
    limit: Optional[int] = None,
) -> Optional[int]:
    """Largest number of simultaneously satisfiable clauses (linear SAT-UNSAT search).

    The search stops as soon as `limit` clauses are satisfied, so a result at
    or above `limit` is only a lower bound. Returns None when the budget runs
    out or the instance is too large for the totalizer.
    """
    n = formula.ncl
    if n > settings.MAXSAT_MAX_CLAUSES:
        logger.info(f"Skipping MaxSAT bound: {n} clauses above {settings.MAXSAT_MAX_CLAUSES}")
        return None
    budget = (budget or SatBudget()).narrowed(conflicts=settings.MAXSAT_CONFLICT_LIMIT)
    if budget.expired():
        return None
    stop = n if limit is None else min(limit, n)
    instance = SatInstance(formula)

    outcome = instance.solve((), budget)
    if outcome.status is SatStatus.UNKNOWN:
        return None
    if outcome.is_unsat:
        return 0
    best = len(satisfied_clauses(formula, outcome.model))
    if best >= stop:
        return best

    # at most `ubound` clauses may stay unselected once best improves
    ubound = n - best - 1
    if n * (ubound + 1) > settings.MAXSAT_MAX_COUNTER_SIZE:
        logger.info(f"Skipping MaxSAT bound: totalizer over {n} clauses up to {ubound} too large")
        return None
    if budget.expired():
        return None
    outputs = at_most_outputs(instance.solver, [-instance.selector(i) for i in formula.indices], ubound)
    while best < stop:
        outcome = instance.solve((), budget, extra=[-outputs[n - best - 1]])
        if outcome.status is SatStatus.UNKNOWN:
            return None
        if outcome.is_unsat:
            break
        best = len(satisfied_clauses(formula, outcome.model))
    return best


def card_bounds(
    formula: CnfFormula,
    mcses: Sequence[Iterable[int]],
    kernel: Optional[Iterable[int]] = None,
    timeout: Optional[float] = None,
    budget: Optional[SatBudget] = None,
) -> Tuple[int, int]:
    """(lb, ub) on MUS size: a minimum hitting set of the MCSes, and one more than the MaxSAT optimum."""
    lb = len(minimum_hitting_set(mcses))
    cap = formula.ncl if kernel is None else min(len(frozenset(kernel)), formula.ncl)
    opt = max_satisfiable_count(formula, budget or SatBudget.from_timeout(timeout), limit=cap - 1)
    if opt is None:
        ub = cap
        logger.warning(f"MaxSAT bound unavailable; upper bound falls back to {ub}")
    else:
        ub = min(opt + 1, cap)
    return min(lb, ub), ub


def cover_rules(formula: CnfFormula) -> List[CoverRule]:
    occurrences = literal_occurrences(formula)
    rules: List[CoverRule] = []
    for clause in formula.clauses:
        for lit in clause.literals:
            rules.append(
                CoverRule(trigger=clause.index, literal=lit, candidates=tuple(occurrences.get(-lit, ())))
            )
    return rules


def build_bundle(
    formula: CnfFormula,
    flags: Optional[HeuristicFlags] = None,
    timeout: Optional[float] = None,
) -> HeuristicBundle:
    """Compute the artifacts the enabled heuristics need (all of them when flags is None).

    Every phase draws on one deadline; once it passes, the SAT-backed
    artifacts fall back to their coarse safe values.
    """
    wanted = set(flags.enabled()) if flags is not None else set(Heuristic)
    timeout = settings.TIMEOUT_SECONDS if timeout is None else timeout
    started = time.monotonic()
    budget = SatBudget.from_timeout(timeout)

    kernel = None
    if wanted & {Heuristic.H1, Heuristic.H2}:
        kernel = union_overapprox(formula, budget=budget)
    collection = None
    if wanted & {Heuristic.H2, Heuristic.H4}:
        collection = enumerate_mcs(formula, budget=budget.narrowed(timeout * settings.MCS_BUDGET_FRACTION))
    bounds = None
    if Heuristic.H2 in wanted:
        bounds = card_bounds(formula, collection.mcses, kernel, budget=budget)
    if budget.expired():
        logger.warning(f"Heuristic budget of {timeout:.3f}s ran out; SAT-backed artifacts are coarse")

    bundle = HeuristicBundle(
        ncl=formula.ncl,
        union_overapprox=kernel if Heuristic.H1 in wanted else None,
        card_bounds=bounds,
        components=components(formula) if Heuristic.H3 in wanted else None,
        mcses=collection.mcses if Heuristic.H4 in wanted else None,
        mcs_complete=collection.complete if collection is not None else False,
        cover_rules=cover_rules(formula) if Heuristic.H5 in wanted else None,
    )
    logger.info(f"Heuristic bundle ready in {time.monotonic() - started:.3f}s: {bundle.summary().model_dump(exclude_none=True)}")
    return bundle
