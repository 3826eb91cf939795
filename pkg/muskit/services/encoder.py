"""Translate a CNF formula into the ground ASP program whose answer sets are its
unsatisfiable cores, add the heuristic constraints, and render ASP-Core-2 text.

Rule order follows the encoding: variable guesses, unsat derivations, the
unsat requirement, saturation, clause selection; heuristic groups come after.
"""
import logging
from itertools import combinations
from math import comb
from typing import Iterable, List, Optional, Sequence, Tuple

from muskit.core.config import settings
from muskit.models.asp import (
    UNSAT,
    AspProgram,
    AspRule,
    Atom,
    AtomKind,
    RuleForm,
    cls_atom,
    neg_atom,
    other,
    pos_atom,
)
from muskit.models.cnf import CnfFormula
from muskit.schemas.encoding import EncodingOptions, Heuristic
from muskit.schemas.heuristics import CoverRule

logger = logging.getLogger(__name__)

SELECT = "select"
BANNERS = {
    "h1": "H1: clauses outside the lean kernel",
    "h3": "H3: component decomposition",
    "h4": "H4: every MUS hits each known MCS",
    "h5": "H5: negative literal cover",
}
SOLVER_INVOCATION = "clingo --enum-mode=domRec --heuristic=domain 0"


class EncodingError(ValueError):
    """Heuristic flags and bundle contents do not match"""
    pass


def selector_set(ncl: int) -> Tuple[Atom, ...]:
    return tuple(cls_atom(i) for i in range(1, ncl + 1))


def program_selectors(program: AspProgram) -> Tuple[Atom, ...]:
    return tuple(sorted((a for a in program.atoms if a.kind is AtomKind.CLS), key=lambda a: a.index))


def _check_bundle(opts: EncodingOptions, formula: CnfFormula) -> None:
    enabled = opts.heuristics_enabled.enabled()
    if not enabled:
        return
    bundle = opts.bundle
    if bundle is None:
        raise EncodingError(f"Heuristics {[h.value for h in enabled]} enabled without a bundle")
    if bundle.ncl != formula.ncl:
        raise EncodingError(f"Bundle was computed for {bundle.ncl} clauses, formula has {formula.ncl}")
    needs = {
        Heuristic.H1: bundle.union_overapprox,
        Heuristic.H2: bundle.card_bounds,
        Heuristic.H3: bundle.components,
        Heuristic.H4: bundle.mcses,
        Heuristic.H5: bundle.cover_rules,
    }
    missing = [h.value for h in enabled if needs[h] is None]
    if missing:
        raise EncodingError(f"Bundle lacks artifacts for {missing}")


def build_program(formula: CnfFormula, opts: Optional[EncodingOptions] = None) -> AspProgram:
    opts = opts or EncodingOptions()
    _check_bundle(opts, formula)
    flags = opts.heuristics_enabled
    bundle = opts.bundle
    variables = formula.variables
    selectors = selector_set(formula.ncl)

    rules: List[AspRule] = []
    for x in variables:
        rules.append(AspRule.disjunctive((pos_atom(x), neg_atom(x)), origin="guess"))
    for clause in formula.clauses:
        body = [cls_atom(clause.index)]
        body.extend(neg_atom(lit) if lit > 0 else pos_atom(-lit) for lit in clause.literals)
        rules.append(AspRule.disjunctive((UNSAT,), body, origin="derive"))
    rules.append(AspRule.constraint(neg=(UNSAT,), origin="require"))
    for x in variables:
        rules.append(AspRule.disjunctive((pos_atom(x),), (UNSAT,), origin="saturate"))
        rules.append(AspRule.disjunctive((neg_atom(x),), (UNSAT,), origin="saturate"))

    lb = bundle.card_bounds[0] if flags.h2 else 0
    rules.append(AspRule.cardinality(selectors, lb, origin=SELECT))
    if flags.h2:
        # kept next to the choice rule; emitted text folds them into its upper bound
        rules.extend(upper_bound_constraints(selectors, bundle.card_bounds[1]))
    program = AspProgram(tuple(rules))

    if flags.h1:
        program = apply_h1(program, bundle.union_overapprox)
    if flags.h3:
        program = apply_h3(program, bundle.components)
    if flags.h4:
        program = apply_h4(program, bundle.mcses)
    if flags.h5:
        program = apply_h5(program, bundle.cover_rules)
    logger.debug(f"Built program: {len(program)} rules, {len(program.atoms)} atoms, heuristics={flags.label()}")
    return program


def apply_h1(program: AspProgram, union_overapprox: Iterable[int]) -> AspProgram:
    keep = frozenset(union_overapprox)
    return program.extend(
        AspRule.constraint(pos=(a,), origin="h1")
        for a in program_selectors(program)
        if a.index not in keep
    )


def upper_bound_constraints(selectors: Sequence[Atom], ub: int) -> List[AspRule]:
    """Constraints rejecting more than `ub` selected clauses, one per (ub+1)-subset.

    Omitted (with a warning) when the subset count exceeds H2_SUBSET_LIMIT; the
    emitted text still carries the bound on the choice rule.
    """
    n = len(selectors)
    if ub >= n:
        return []
    count = comb(n, ub + 1)
    if count > settings.H2_SUBSET_LIMIT:
        logger.warning(f"Skipping {count} upper-bound constraints (limit {settings.H2_SUBSET_LIMIT})")
        return []
    return [AspRule.constraint(pos=subset, origin="h2") for subset in combinations(selectors, ub + 1)]


def apply_h3(program: AspProgram, partition: Sequence[Iterable[int]]) -> AspProgram:
    groups = [sorted(g) for g in partition]
    total = sum(len(g) for g in groups)
    pairs = (total * total - sum(len(g) ** 2 for g in groups)) // 2
    if pairs <= settings.H3_PAIR_LIMIT:
        component_of = {i: k for k, g in enumerate(groups) for i in g}
        indices = sorted(component_of)
        return program.extend(
            AspRule.constraint(pos=(cls_atom(i), cls_atom(j)), origin="h3")
            for pos_i, i in enumerate(indices)
            for j in indices[pos_i + 1:]
            if component_of[i] != component_of[j]
        )

    # linear form: comp_k marks a used component, upto_k any used among 1..k
    logger.info(f"H3 uses the component-id formulation ({pairs} cross pairs)")
    rules: List[AspRule] = []
    for k, group in enumerate(groups, start=1):
        comp, upto = other(f"comp_{k}"), other(f"upto_{k}")
        rules.extend(AspRule.disjunctive((comp,), (cls_atom(i),), origin="h3") for i in group)
        rules.append(AspRule.disjunctive((upto,), (comp,), origin="h3"))
        if k > 1:
            previous = other(f"upto_{k - 1}")
            rules.append(AspRule.disjunctive((upto,), (previous,), origin="h3"))
            rules.append(AspRule.constraint(pos=(comp, previous), origin="h3"))
    return program.extend(rules)


def apply_h4(program: AspProgram, mcses: Sequence[Iterable[int]]) -> AspProgram:
    return program.extend(
        AspRule.constraint(neg=[cls_atom(i) for i in sorted(mcs)], origin="h4")
        for mcs in mcses
    )


def apply_h5(program: AspProgram, rules: Sequence[CoverRule]) -> AspProgram:
    seen = set()
    added: List[AspRule] = []
    for rule in rules:
        key = (rule.trigger, tuple(sorted(rule.candidates)))
        if key in seen:
            continue
        seen.add(key)
        trigger = cls_atom(rule.trigger)
        if rule.is_exclusion:
            added.append(AspRule.constraint(pos=(trigger,), origin="h5"))
        else:
            head = [cls_atom(j) for j in key[1]]
            added.append(AspRule.cardinality(head, 1, pos=(trigger,), origin="h5"))
    return program.extend(added)


def _body_text(rule: AspRule) -> str:
    parts = [str(a) for a in rule.body_pos] + [f"not {a}" for a in rule.body_neg]
    return ", ".join(parts)


def rule_text(rule: AspRule, ub: Optional[int] = None) -> str:
    body = _body_text(rule)
    if rule.form is RuleForm.CARDINALITY:
        head = f"{rule.lb} {{ {'; '.join(map(str, rule.head))} }}".replace("{  }", "{ }")
        if ub is not None:
            head += f" {ub}"
    elif rule.head:
        head = " | ".join(map(str, rule.head))
    else:
        return f":- {body or '#true'}."
    return f"{head} :- {body}." if body else f"{head}."


def emit_aspcore2(program: AspProgram, opts: Optional[EncodingOptions] = None) -> str:
    opts = opts or EncodingOptions()
    ub = None
    if opts.heuristics_enabled.h2 and opts.bundle is not None and opts.bundle.card_bounds is not None:
        ub = opts.bundle.card_bounds[1]

    lines: List[str] = []
    group = None
    for rule in program.rules:
        if rule.origin == "h2":
            continue
        if rule.origin in BANNERS and rule.origin != group:
            lines.append(f"% --- {BANNERS[rule.origin]} ---")
        group = rule.origin
        lines.append(rule_text(rule, ub if rule.origin == SELECT else None))

    selectors = program_selectors(program)
    if opts.emit_show_directive:
        lines.extend(f"#show {a}/0." for a in selectors)
    if opts.emit_domain_heuristic:
        lines.extend(f"#heuristic {a}. [1,false]" for a in selectors)
    return "\n".join(lines) + "\n" if lines else ""
