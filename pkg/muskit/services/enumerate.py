"""MUS enumeration and counting engines.

- oracle: exhaustive subset walk, desk-scale ground truth
- asp-route: answer sets of the encoded program, minimal over the selectors
- seed-shrink: map-guided seed/shrink loop sharing the heuristic constraints
- hybrid: picks one of the two above by clause count
"""
import logging
import time
from typing import Iterable, List, Optional, Tuple

from muskit.core.config import settings
from muskit.core.satcore import SatBudget, SatBudgetExceeded, SatInstance, SatSolver, SatStatus
from muskit.models.cnf import CnfFormula
from muskit.schemas.encoding import EncodingOptions, HeuristicFlags
from muskit.schemas.enumeration import (
    Engine,
    EnumerationBudget,
    EnumerationResult,
    HybridPolicy,
    OracleReport,
    normalize_sets,
)
from muskit.schemas.heuristics import HeuristicBundle
from muskit.services.aspsem import BruteForceCapExceeded, enumerate_answer_sets, subset_minimal_filter
from muskit.services.cnf import satisfied_clauses
from muskit.services.encoder import build_program, selector_set
from muskit.services.heuristics import build_bundle, grow

logger = logging.getLogger(__name__)


class ShrinkError(ValueError):
    """Shrink was handed a satisfiable seed"""
    pass


class MusVerificationError(RuntimeError):
    """An emitted set failed the inline MUS re-check"""
    pass


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def _indices(mask: int) -> List[int]:
    return [low.bit_length() for low in _bits(mask)]


def oracle_report(formula: CnfFormula, cap: Optional[int] = None) -> OracleReport:
    """Cores, MCSes and MUSes by walking every clause subset.

    A subset is unsatisfiable when one of its one-smaller subsets is, and
    satisfiable when it lies inside the clauses satisfied by an earlier model;
    only the remaining subsets reach the SAT engine.
    """
    cap = settings.ORACLE_BRUTE_FORCE_CAP if cap is None else cap
    n = formula.ncl
    if n > cap:
        raise BruteForceCapExceeded("clause set", n, cap)

    instance = SatInstance(formula)
    unsat = bytearray(1 << n)
    models: List[int] = []
    calls = 0
    for mask in range(1 << n):
        if any(unsat[mask ^ low] for low in _bits(mask)):
            unsat[mask] = 1
            continue
        if any(mask & ~m == 0 for m in models):
            continue
        calls += 1
        outcome = instance.solve(_indices(mask))
        if outcome.is_unsat:
            unsat[mask] = 1
        else:
            models.append(sum(1 << (i - 1) for i in satisfied_clauses(formula, outcome.model)))

    full = (1 << n) - 1
    cores, muses, mcses = [], [], []
    for mask in range(1 << n):
        if unsat[mask]:
            cores.append(_indices(mask))
            if not any(unsat[mask ^ low] for low in _bits(mask)):
                muses.append(_indices(mask))
        elif mask != full and all(unsat[mask | low] for low in _bits(full & ~mask)):
            mcses.append(_indices(full & ~mask))
    logger.debug(f"Oracle: {calls} SAT calls over {1 << n} subsets, {len(muses)} MUSes")
    return OracleReport(cores=normalize_sets(cores), mcses=normalize_sets(mcses), muses=normalize_sets(muses))


def oracle_enumerate(formula: CnfFormula, cap: Optional[int] = None) -> EnumerationResult:
    started = time.monotonic()
    report = oracle_report(formula, cap)
    return EnumerationResult(
        muses=report.muses,
        complete=True,
        count=len(report.muses),
        elapsed=time.monotonic() - started,
        engine=Engine.ORACLE,
        satisfiable=not report.cores,
    )


def _resolve_options(formula: CnfFormula, opts: Optional[EncodingOptions], timeout: Optional[float]) -> EncodingOptions:
    opts = opts or EncodingOptions()
    if opts.heuristics_enabled.any() and opts.bundle is None:
        bundle = build_bundle(formula, opts.heuristics_enabled, timeout)
        opts = opts.model_copy(update={"bundle": bundle})
    return opts


def asp_route_enumerate(
    formula: CnfFormula,
    opts: Optional[EncodingOptions] = None,
    cap: Optional[int] = None,
    timeout: Optional[float] = None,
) -> EnumerationResult:
    """MUSes as the selector-minimal answer sets of the encoded program (desk scale).

    `timeout` bounds the heuristic bundle; the answer-set walk itself is bounded
    by the atom cap.
    """
    started = time.monotonic()
    opts = _resolve_options(formula, opts, timeout)
    program = build_program(formula, opts)
    answer_sets = enumerate_answer_sets(program, cap)
    minimal = subset_minimal_filter(answer_sets, selector_set(formula.ncl))
    muses = normalize_sets(m.selected_clauses for m in minimal)
    return EnumerationResult(
        muses=muses,
        complete=True,
        count=len(muses),
        elapsed=time.monotonic() - started,
        engine=Engine.ASP_ROUTE,
        satisfiable=not answer_sets,
        bundle_summary=opts.bundle.summary() if opts.bundle is not None else None,
    )


def shrink(
    formula: CnfFormula,
    seed: Iterable[int],
    instance: Optional[SatInstance] = None,
    budget: Optional[SatBudget] = None,
) -> frozenset[int]:
    """Deletion-based MUS extraction in descending index order.

    Every unsatisfiable answer narrows the working set to the failed
    assumptions. Raises SatBudgetExceeded when a SAT call runs out of budget.
    """
    instance = instance or SatInstance(formula)
    seed = frozenset(seed)
    outcome = instance.solve(seed, budget)
    if outcome.status is SatStatus.UNKNOWN:
        raise SatBudgetExceeded("shrink: initial check")
    if outcome.is_sat:
        raise ShrinkError(f"Seed {sorted(seed)} is satisfiable")

    current = set(outcome.failed_assumptions or seed)
    for i in sorted(current, reverse=True):
        if i not in current:
            continue
        if budget is not None and budget.expired():
            raise SatBudgetExceeded(f"shrink: deadline passed before clause {i}")
        trial = current - {i}
        step = instance.solve(trial, budget)
        if step.status is SatStatus.UNKNOWN:
            raise SatBudgetExceeded(f"shrink: dropping clause {i}")
        if step.is_unsat:
            current = set(step.failed_assumptions or trial)
    return frozenset(current)


def verify_mus(instance: SatInstance, mus: frozenset[int]) -> bool:
    if not instance.solve(mus).is_unsat:
        return False
    return all(instance.solve(mus - {i}).is_sat for i in mus)


def _load_map(solver: SatSolver, bundle: HeuristicBundle) -> None:
    """Heuristic constraints as clauses over the map variables (variable i = clause i)."""
    ncl = bundle.ncl
    if bundle.union_overapprox is not None:
        for i in range(1, ncl + 1):
            if i not in bundle.union_overapprox:
                solver.add_clause([-i])
    if bundle.components is not None:
        _load_components(solver, bundle.components)
    for mcs in bundle.mcses or ():
        solver.add_clause(sorted(mcs))
    for rule in bundle.cover_rules or ():
        solver.add_clause([-rule.trigger, *rule.candidates])


def _load_components(solver: SatSolver, groups: List[frozenset[int]]) -> None:
    total = sum(len(g) for g in groups)
    pairs = (total * total - sum(len(g) ** 2 for g in groups)) // 2
    if pairs <= settings.H3_PAIR_LIMIT:
        for k, group in enumerate(groups):
            for later in groups[k + 1:]:
                for i in group:
                    for j in later:
                        solver.add_clause([-i, -j])
        return
    previous = None
    for group in groups:
        comp, upto = solver.new_var(phase=False), solver.new_var(phase=False)
        for i in group:
            solver.add_clause([-i, comp])
        solver.add_clause([-comp, upto])
        if previous is not None:
            solver.add_clause([-previous, upto])
            solver.add_clause([-comp, -previous])
        previous = upto


def seed_shrink_enumerate(
    formula: CnfFormula,
    bundle: Optional[HeuristicBundle] = None,
    budget: Optional[EnumerationBudget] = None,
    engine: Engine = Engine.SEED_SHRINK,
) -> EnumerationResult:
    """Enumerate MUSes by alternating map seeds with grow and shrink.

    The map solver prefers selecting clauses, so seeds start large. A
    satisfiable seed grows to a maximal satisfiable set whose complement is
    blocked from below; an unsatisfiable one shrinks to a MUS that is blocked
    from above. The map running dry means every MUS has been emitted.
    """
    started = time.monotonic()
    budget = budget or EnumerationBudget()
    sat_budget = SatBudget.from_timeout(budget.timeout)
    summary = bundle.summary() if bundle is not None else None
    bundle = bundle or HeuristicBundle(ncl=formula.ncl)
    lb = bundle.card_bounds[0] if bundle.card_bounds is not None else 0

    instance = SatInstance(formula)
    map_solver = SatSolver(nvars=formula.ncl, seed=settings.SEED, default_phase=True)
    _load_map(map_solver, bundle)
    all_indices = frozenset(formula.indices)

    muses: List[frozenset[int]] = []
    complete = False
    satisfiable = False
    rounds = 0
    while True:
        if sat_budget.expired():
            logger.info("Enumeration stopped by the time budget")
            break
        if budget.max_muses is not None and len(muses) >= budget.max_muses:
            logger.info(f"Enumeration stopped after {len(muses)} MUSes")
            break
        result = map_solver.solve(budget=sat_budget)
        if result.status is SatStatus.UNKNOWN:
            break
        if result.status is SatStatus.UNSAT:
            complete = True
            break
        rounds += 1
        seed = frozenset(i for i in formula.indices if result.model[i])

        if len(seed) < lb:
            # too small to hold a MUS, so every subset is satisfiable
            map_solver.add_clause(sorted(all_indices - seed))
            continue

        outcome = instance.solve(seed, sat_budget)
        if outcome.status is SatStatus.UNKNOWN:
            break
        if outcome.is_sat:
            mss = grow(instance, outcome.model, sat_budget)
            if mss is None:
                break
            mcs = all_indices - mss
            if not mcs:
                satisfiable = complete = True
                break
            map_solver.add_clause(sorted(mcs))
            continue

        try:
            mus = shrink(formula, outcome.failed_assumptions or seed, instance, sat_budget)
        except SatBudgetExceeded as exc:
            logger.info(f"Shrink interrupted: {exc}")
            break
        if settings.VERIFY_MUSES and not verify_mus(instance, mus):
            raise MusVerificationError(f"Emitted set {sorted(mus)} is not a MUS")
        muses.append(mus)
        logger.debug(f"MUS #{len(muses)}: {sorted(mus)}")
        map_solver.add_clause([-i for i in sorted(mus)])

    elapsed = time.monotonic() - started
    logger.info(f"{engine.value}: {len(muses)} MUSes in {rounds} rounds, complete={complete}, {elapsed:.3f}s")
    return EnumerationResult(
        muses=normalize_sets(muses),
        complete=complete,
        count=len(muses),
        elapsed=elapsed,
        engine=engine,
        satisfiable=satisfiable if complete else None,
        bundle_summary=summary,
    )


def choose_engine(ncl: int, policy: Optional[HybridPolicy] = None) -> Engine:
    policy = policy or HybridPolicy(clause_threshold=settings.HYBRID_CLAUSE_THRESHOLD)
    return Engine.ASP_ROUTE if ncl < policy.clause_threshold else Engine.SEED_SHRINK


def bundled_seed_shrink(
    formula: CnfFormula,
    opts: Optional[EncodingOptions] = None,
    budget: Optional[EnumerationBudget] = None,
    engine: Engine = Engine.SEED_SHRINK,
) -> EnumerationResult:
    """Seed-shrink under the enabled heuristics, bundle and search sharing one budget.

    The bundle gets at most BUNDLE_BUDGET_FRACTION of the time budget; the
    search gets whatever is left.
    """
    started = time.monotonic()
    budget = budget or EnumerationBudget()
    opts = opts or EncodingOptions()
    timeout = budget.timeout if budget.timeout is not None else settings.TIMEOUT_SECONDS
    if opts.bundle is not None:
        bundle = opts.bundle.only(opts.heuristics_enabled)
    elif opts.heuristics_enabled.any():
        bundle = build_bundle(formula, opts.heuristics_enabled, timeout * settings.BUNDLE_BUDGET_FRACTION)
    else:
        bundle = None
    if budget.timeout is not None:
        remaining = max(budget.timeout - (time.monotonic() - started), 1e-3)
        budget = budget.model_copy(update={"timeout": remaining})
    result = seed_shrink_enumerate(formula, bundle, budget, engine=engine)
    return result.model_copy(update={"elapsed": time.monotonic() - started})


def hybrid_enumerate(
    formula: CnfFormula,
    policy: Optional[HybridPolicy] = None,
    opts: Optional[EncodingOptions] = None,
    budget: Optional[EnumerationBudget] = None,
) -> EnumerationResult:
    """Heuristic-constrained enumeration below the clause threshold, plain seed-shrink above it.

    Without explicit options the asp-route side enables every heuristic.
    """
    engine = choose_engine(formula.ncl, policy)
    logger.info(f"Engine {engine.value} for {formula.ncl} clauses")
    if engine is Engine.SEED_SHRINK:
        return seed_shrink_enumerate(formula, None, budget)
    opts = opts or EncodingOptions(heuristics_enabled=HeuristicFlags.all())
    return bundled_seed_shrink(formula, opts, budget, engine=Engine.ASP_ROUTE)


def count_mus(
    formula: CnfFormula,
    budget: Optional[EnumerationBudget] = None,
    policy: Optional[HybridPolicy] = None,
    opts: Optional[EncodingOptions] = None,
) -> Tuple[int, bool]:
    result = hybrid_enumerate(formula, policy, opts, budget)
    return result.count, result.complete
