"""Ground answer-set semantics by exhaustive search.

This is the semantic oracle for the encoding: rule satisfaction, the
Gelfond-Lifschitz reduct, answer-set checking and brute-force enumeration of
(subset-minimal) answer sets. Exponential on purpose and capped by
`settings.ASP_BRUTE_FORCE_CAP` atoms.

Exhaustive search walks the atoms in a fixed order and checks each rule as soon
as its last atom is decided, so every subset is still covered.
"""
import logging
from collections import Counter
from typing import AbstractSet, Iterable, Iterator, Optional, Sequence, Union

from muskit.core.config import settings
from muskit.models.asp import AspProgram, AspRule, Atom, Interpretation, RuleForm

logger = logging.getLogger(__name__)

AtomSet = Union[Interpretation, AbstractSet[Atom]]


class BruteForceCapExceeded(ValueError):
    """The instance is too large for a desk-scale exhaustive oracle"""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} size {size} exceeds brute-force cap {cap}")
        self.size = size
        self.cap = cap


def _true_atoms(tau: AtomSet) -> AbstractSet[Atom]:
    return tau.true_atoms if isinstance(tau, Interpretation) else tau


def satisfies_rule(tau: AtomSet, rule: AspRule) -> bool:
    true = _true_atoms(tau)
    if any(a not in true for a in rule.body_pos):
        return True
    if any(a in true for a in rule.body_neg):
        return True
    if rule.form is RuleForm.DISJUNCTIVE:
        return any(a in true for a in rule.head)
    return sum(1 for a in rule.head if a in true) >= rule.lb


def satisfies_program(tau: AtomSet, program: AspProgram) -> bool:
    return all(satisfies_rule(tau, r) for r in program.rules)


def gl_reduct(program: AspProgram, tau: AtomSet) -> AspProgram:
    true = _true_atoms(tau)
    reduct: list[AspRule] = []
    for rule in program.rules:
        if any(a in true for a in rule.body_neg):
            continue
        if rule.form is RuleForm.DISJUNCTIVE:
            reduct.append(AspRule.disjunctive(rule.head, rule.body_pos, origin=rule.origin))
        else:
            reduct.extend(
                AspRule.disjunctive((a,), rule.body_pos, origin=rule.origin)
                for a in rule.head
                if a in true
            )
    return AspProgram(tuple(reduct))


def _search(
    rules: Sequence[AspRule],
    atoms: Iterable[Atom],
) -> Iterator[frozenset[Atom]]:
    """Yield every subset of `atoms` satisfying `rules`; atoms outside `atoms` stay false."""
    counts = Counter(a for r in rules for a in r.atoms)
    order = sorted(atoms, key=lambda a: (-counts[a], a.sort_key))
    position = {a: i for i, a in enumerate(order)}

    checks: list[list[AspRule]] = [[] for _ in order]
    for rule in rules:
        placed = [position[a] for a in rule.atoms if a in position]
        if placed:
            checks[max(placed)].append(rule)
        elif not satisfies_rule(frozenset(), rule):
            return

    true: set[Atom] = set()

    def walk(i: int) -> Iterator[frozenset[Atom]]:
        if i == len(order):
            yield frozenset(true)
            return
        atom = order[i]
        for value in (False, True):
            if value:
                true.add(atom)
            if all(satisfies_rule(true, r) for r in checks[i]):
                yield from walk(i + 1)
            if value:
                true.discard(atom)

    yield from walk(0)


def _check_cap(program: AspProgram, cap: Optional[int]) -> None:
    cap = settings.ASP_BRUTE_FORCE_CAP if cap is None else cap
    if len(program.atoms) > cap:
        raise BruteForceCapExceeded("program atom set", len(program.atoms), cap)


def enumerate_models(program: AspProgram, cap: Optional[int] = None) -> Iterator[Interpretation]:
    """Every interpretation over at(P) that satisfies all rules (classical models)."""
    _check_cap(program, cap)
    for true in _search(program.rules, program.atoms):
        yield Interpretation(true)


def _has_smaller_model(reduct: AspProgram, model: frozenset[Atom]) -> bool:
    return any(len(m) < len(model) for m in _search(reduct.rules, model))


def is_answer_set(program: AspProgram, model: AtomSet) -> bool:
    true = frozenset(_true_atoms(model))
    if not satisfies_program(true, program):
        return False
    reduct = gl_reduct(program, true)
    if true - reduct.atoms:
        # atoms the reduct never mentions can be dropped from any model of it
        return False
    return not _has_smaller_model(reduct, true)


def enumerate_answer_sets(program: AspProgram, cap: Optional[int] = None) -> set[Interpretation]:
    _check_cap(program, cap)
    found = set()
    candidates = 0
    for true in _search(program.rules, program.atoms):
        candidates += 1
        reduct = gl_reduct(program, true)
        if true - reduct.atoms or _has_smaller_model(reduct, true):
            continue
        found.add(Interpretation(true))
    logger.debug(f"Answer-set search: {candidates} models, {len(found)} answer sets")
    return found


def subset_minimal_filter(sets: Iterable[Interpretation], over: Iterable[Atom]) -> set[Interpretation]:
    over = frozenset(over)
    projected = [(m, m.project(over)) for m in sets]
    return {
        m for m, proj in projected
        if not any(other < proj for _, other in projected)
    }
