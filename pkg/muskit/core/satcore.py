"""Embedded CDCL SAT engine with assumption literals.

The engine follows the usual MiniSat layout: two watched literals, first-UIP
learning, activity-ordered branching with phase saving, Luby restarts and
assumptions decided as the first decision levels. Literals are signed ints.

`SatInstance` loads a CNF formula with one selector per clause, so clause
subsets are activated through assumptions.
"""
import enum
import heapq
import logging
import random
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from pysat.card import ITotalizer

from muskit.core.config import settings
from muskit.models.cnf import Assignment, CnfFormula

logger = logging.getLogger(__name__)

_RESTART_BASE = 100
_VAR_DECAY = 0.95
_RESCALE_LIMIT = 1e100


class SatStatus(str, enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


class SatBudgetExceeded(Exception):
    """Raised by callers that need a definite answer when the budget ran out"""
    pass


@dataclass(frozen=True)
class SatBudget:
    conflicts: Optional[int] = None
    deadline: Optional[float] = None

    @classmethod
    def from_timeout(cls, seconds: Optional[float], conflicts: Optional[int] = None) -> "SatBudget":
        deadline = time.monotonic() + seconds if seconds is not None else None
        return cls(conflicts=conflicts, deadline=deadline)

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline

    def remaining(self) -> Optional[float]:
        return None if self.deadline is None else max(self.deadline - time.monotonic(), 0.0)

    def narrowed(self, seconds: Optional[float] = None, conflicts: Optional[int] = None) -> "SatBudget":
        """Same deadline or an earlier one, with an optional per-call conflict cap."""
        deadline = self.deadline
        if seconds is not None:
            own = time.monotonic() + seconds
            deadline = own if deadline is None else min(deadline, own)
        return SatBudget(conflicts=conflicts if conflicts is not None else self.conflicts, deadline=deadline)


@dataclass(frozen=True)
class SolverResult:
    status: SatStatus
    model: Optional[tuple[bool, ...]] = None
    core: frozenset[int] = frozenset()


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class SatSolver:
    """Incremental CDCL solver over variables 1..nvars."""

    def __init__(self, nvars: int = 0, seed: int = 0, default_phase: bool = False):
        self._rng = random.Random(seed) if seed else None
        self._default_phase = default_phase
        self._ok = True

        self._value: list[int] = [0]
        self._level: list[int] = [0]
        self._reason: list[Optional[list[int]]] = [None]
        self._activity: list[float] = [0.0]
        self._phase: list[bool] = [False]
        self._seen: list[bool] = [False]
        self._watches: dict[int, list[list[int]]] = {}
        self._heap: list[tuple[float, int]] = []
        self._var_inc = 1.0

        self._clauses: list[list[int]] = []
        self._learnts: list[list[int]] = []
        self._max_learnts = 2000.0

        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0

        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

        for _ in range(nvars):
            self.new_var()

    @property
    def nvars(self) -> int:
        return len(self._value) - 1

    def new_var(self, phase: Optional[bool] = None) -> int:
        v = len(self._value)
        self._value.append(0)
        self._level.append(0)
        self._reason.append(None)
        self._activity.append(self._rng.random() * 1e-5 if self._rng else 0.0)
        self._phase.append(self._default_phase if phase is None else phase)
        self._seen.append(False)
        self._watches[v] = []
        self._watches[-v] = []
        heapq.heappush(self._heap, (-self._activity[v], v))
        return v

    def ensure_vars(self, nvars: int) -> None:
        while self.nvars < nvars:
            self.new_var()

    def _lit_value(self, lit: int) -> int:
        v = self._value[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, literals: Iterable[int]) -> bool:
        """Add a clause at decision level 0. Returns False once the solver is unsat."""
        if not self._ok:
            return False
        if self._trail_lim:
            self._backtrack(0)
        clause: list[int] = []
        present: set[int] = set()
        for lit in literals:
            if abs(lit) > self.nvars or lit == 0:
                raise ValueError(f"Literal {lit} outside solver variables 1..{self.nvars}")
            if -lit in present:
                return True
            val = self._lit_value(lit)
            if val == 1:
                return True
            if val == -1 or lit in present:
                continue
            present.add(lit)
            clause.append(lit)

        if not clause:
            self._ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self._ok = False
            return self._ok
        self._clauses.append(clause)
        self._watches[clause[0]].append(clause)
        self._watches[clause[1]].append(clause)
        return True

    def _enqueue(self, lit: int, reason: Optional[list[int]]) -> None:
        v = abs(lit)
        self._value[v] = 1 if lit > 0 else -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self) -> Optional[list[int]]:
        trail = self._trail
        value = self._value
        watches = self._watches
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            self.propagations += 1
            false_lit = -p
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fv = value[abs(first)]
                fval = fv if first > 0 else -fv
                if fval == 1:
                    ws[j] = c
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = value[abs(lk)]
                    if (vk if lk > 0 else -vk) != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = c
                j += 1
                if fval == -1:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self._qhead = len(trail)
                    return c
                self._enqueue(first, c)
            del ws[j:]
        return None

    def _bump(self, v: int) -> None:
        act = self._activity[v] + self._var_inc
        self._activity[v] = act
        if act > _RESCALE_LIMIT:
            self._activity = [a * 1e-100 for a in self._activity]
            self._var_inc *= 1e-100
            self._heap = [(-self._activity[u], u) for u in range(1, len(self._value)) if self._value[u] == 0]
            heapq.heapify(self._heap)
        elif self._value[v] == 0:
            heapq.heappush(self._heap, (-act, v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen = self._seen
        level = self._level
        reason = self._reason
        trail = self._trail
        current = len(self._trail_lim)

        learnt = [0]
        path = 0
        p = 0
        idx = len(trail) - 1
        clause = confl
        while True:
            for q in (clause if p == 0 else clause[1:]):
                v = abs(q)
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if level[v] >= current:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = abs(p)
            clause = reason[v]
            seen[v] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = -p

        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[abs(q)]
            if r is None or any(not seen[abs(x)] and level[abs(x)] > 0 for x in r[1:]):
                kept.append(q)
        for q in learnt[1:]:
            seen[abs(q)] = False

        if len(kept) == 1:
            return kept, 0
        best = max(range(1, len(kept)), key=lambda k: level[abs(kept[k])])
        kept[1], kept[best] = kept[best], kept[1]
        return kept, level[abs(kept[1])]

    def _analyze_final(self, p: int) -> frozenset[int]:
        """Assumptions responsible for assumption `p` being false."""
        failed = {p}
        if not self._trail_lim:
            return frozenset(failed)
        seen = self._seen
        seen[abs(p)] = True
        for k in range(len(self._trail) - 1, self._trail_lim[0] - 1, -1):
            lit = self._trail[k]
            v = abs(lit)
            if not seen[v]:
                continue
            r = self._reason[v]
            if r is None:
                if self._level[v] > 0:
                    failed.add(lit)
            else:
                for q in r[1:]:
                    if self._level[abs(q)] > 0:
                        seen[abs(q)] = True
            seen[v] = False
        seen[abs(p)] = False
        return frozenset(failed)

    def _backtrack(self, target: int) -> None:
        if len(self._trail_lim) <= target:
            return
        lim = self._trail_lim[target]
        value = self._value
        for k in range(len(self._trail) - 1, lim - 1, -1):
            lit = self._trail[k]
            v = abs(lit)
            self._phase[v] = lit > 0
            value[v] = 0
            self._reason[v] = None
            heapq.heappush(self._heap, (-self._activity[v], v))
        del self._trail[lim:]
        del self._trail_lim[target:]
        self._qhead = lim

    def _pick_branch(self) -> int:
        heap = self._heap
        while heap:
            neg_act, v = heapq.heappop(heap)
            if self._value[v] == 0 and -neg_act == self._activity[v]:
                return v
        return 0

    def _reduce_learnts(self) -> None:
        locked = {id(self._reason[abs(c[0])]) for c in self._learnts if self._reason[abs(c[0])] is c}
        ordered = sorted(self._learnts, key=len)
        keep_count = len(ordered) // 2
        kept, dropped = [], set()
        for pos, c in enumerate(ordered):
            if pos < keep_count or len(c) <= 2 or id(c) in locked:
                kept.append(c)
            else:
                dropped.add(id(c))
        if not dropped:
            return
        for lit, ws in self._watches.items():
            self._watches[lit] = [c for c in ws if id(c) not in dropped]
        self._learnts = kept
        logger.debug(f"Reduced learnt clauses to {len(kept)}")

    def solve(self, assumptions: Sequence[int] = (), budget: Optional[SatBudget] = None) -> SolverResult:
        if not self._ok:
            return SolverResult(SatStatus.UNSAT)
        for lit in assumptions:
            if lit == 0 or abs(lit) > self.nvars:
                raise ValueError(f"Assumption {lit} outside solver variables 1..{self.nvars}")
        budget = budget or SatBudget()
        conflict_cap = self.conflicts + budget.conflicts if budget.conflicts is not None else None
        try:
            return self._search(list(assumptions), budget, conflict_cap)
        finally:
            self._backtrack(0)

    def _search(self, assumptions: list[int], budget: SatBudget, conflict_cap: Optional[int]) -> SolverResult:
        restarts = 0
        restart_limit = _luby(restarts) * _RESTART_BASE
        local_conflicts = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                local_conflicts += 1
                if not self._trail_lim:
                    self._ok = False
                    return SolverResult(SatStatus.UNSAT)
                learnt, target = self._analyze(confl)
                self._backtrack(target)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._watches[learnt[0]].append(learnt)
                    self._watches[learnt[1]].append(learnt)
                    self._learnts.append(learnt)
                    self._enqueue(learnt[0], learnt)
                self._var_inc /= _VAR_DECAY

                if conflict_cap is not None and self.conflicts >= conflict_cap:
                    return SolverResult(SatStatus.UNKNOWN)
                if self.conflicts % 64 == 0 and budget.expired():
                    return SolverResult(SatStatus.UNKNOWN)
                if local_conflicts >= restart_limit:
                    restarts += 1
                    local_conflicts = 0
                    restart_limit = _luby(restarts) * _RESTART_BASE
                    self._max_learnts *= 1.1
                    self._backtrack(0)
                continue

            level = len(self._trail_lim)
            if level < len(assumptions):
                p = assumptions[level]
                val = self._lit_value(p)
                if val == -1:
                    core = self._analyze_final(p)
                    return SolverResult(SatStatus.UNSAT, core=core)
                self._trail_lim.append(len(self._trail))
                if val == 0:
                    self._enqueue(p, None)
                continue

            if len(self._learnts) - len(self._trail) >= self._max_learnts:
                self._reduce_learnts()

            v = self._pick_branch()
            if v == 0:
                model = tuple(val == 1 for val in self._value)
                return SolverResult(SatStatus.SAT, model=model)
            self.decisions += 1
            if self.decisions % 1024 == 0 and budget.expired():
                return SolverResult(SatStatus.UNKNOWN)
            self._trail_lim.append(len(self._trail))
            self._enqueue(v if self._phase[v] else -v, None)


def at_most_outputs(solver: SatSolver, literals: Sequence[int], ubound: int) -> list[int]:
    """Load a totalizer over `literals` into `solver` and return its outputs.

    Assuming -out[j] allows at most j of `literals` to be true, for j <= ubound.
    """
    if not literals:
        return []
    with ITotalizer(lits=list(literals), ubound=ubound, top_id=solver.nvars) as tot:
        solver.ensure_vars(tot.top_id)
        for clause in tot.cnf.clauses:
            solver.add_clause(clause)
        outputs = list(tot.rhs)
    logger.debug(f"Totalizer over {len(literals)} literals: {len(outputs)} outputs, top var {solver.nvars}")
    return outputs


@dataclass(frozen=True)
class SatOutcome:
    status: SatStatus
    model: Optional[Assignment] = None
    failed_assumptions: frozenset[int] = frozenset()

    @property
    def is_sat(self) -> bool:
        return self.status is SatStatus.SAT

    @property
    def is_unsat(self) -> bool:
        return self.status is SatStatus.UNSAT


class SatInstance:
    """A formula loaded as (not s_i or C_i), one selector s_i per clause index."""

    def __init__(self, formula: CnfFormula, seed: Optional[int] = None):
        self.formula = formula
        self.solver = SatSolver(seed=settings.SEED if seed is None else seed)
        self.solver.ensure_vars(formula.nvars)
        self._base = formula.nvars
        for clause in formula.clauses:
            s = self.solver.new_var()
            self.solver.add_clause([-s, *clause.literals])

    def selector(self, index: int) -> int:
        if not 1 <= index <= self.formula.ncl:
            raise ValueError(f"Clause index {index} outside 1..{self.formula.ncl}")
        return self._base + index

    def index_of(self, selector_lit: int) -> int:
        return abs(selector_lit) - self._base

    def is_selector(self, lit: int) -> bool:
        return self._base < abs(lit) <= self._base + self.formula.ncl

    def solve(
        self,
        assumptions: Iterable[int],
        budget: Optional[SatBudget] = None,
        extra: Sequence[int] = (),
    ) -> SatOutcome:
        lits = [self.selector(i) for i in sorted(set(assumptions))]
        result = self.solver.solve([*lits, *extra], budget)
        if result.status is SatStatus.SAT:
            values = {v: result.model[v] for v in range(1, self.formula.nvars + 1)}
            return SatOutcome(SatStatus.SAT, model=Assignment(values))
        if result.status is SatStatus.UNSAT:
            failed = frozenset(self.index_of(lit) for lit in result.core if self.is_selector(lit))
            return SatOutcome(SatStatus.UNSAT, failed_assumptions=failed)
        return SatOutcome(SatStatus.UNKNOWN)


def solve(instance: SatInstance, assumptions: Iterable[int], budget: Optional[SatBudget] = None) -> SatOutcome:
    return instance.solve(assumptions, budget)
