import random

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from muskit.core.satcore import (
    SatBudget,
    SatInstance,
    SatSolver,
    SatStatus,
    _luby,
    at_most_outputs,
    solve,
)
from muskit.models.cnf import CnfFormula
from muskit.services.cnf import Evaluation, evaluate
from tests.conftest import truth_table_sat


def pigeonhole(pigeons: int, holes: int) -> list[list[int]]:
    def var(p, h):
        return p * holes + h + 1

    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p in range(pigeons):
            for q in range(p + 1, pigeons):
                clauses.append([-var(p, h), -var(q, h)])
    return clauses


def test_example1_core_is_subset_of_assumptions(example1):
    instance = SatInstance(example1)
    outcome = solve(instance, {1, 2})
    assert outcome.status is SatStatus.UNSAT
    assert outcome.failed_assumptions <= {1, 2}
    assert solve(instance, outcome.failed_assumptions).is_unsat


def test_example1_satisfiable_subset_model(example1):
    instance = SatInstance(example1)
    outcome = solve(instance, {2, 3, 4})
    assert outcome.is_sat
    assert outcome.model.value(1) is False
    assert outcome.model.value(2) is True


def test_empty_assumptions_are_satisfiable(example1):
    assert solve(SatInstance(example1), set()).is_sat


def test_incremental_calls_share_one_instance(example1):
    instance = SatInstance(example1)
    answers = [solve(instance, s).status for s in ({1}, {1, 2}, {3, 4}, {1, 3, 4}, {2, 3, 4})]
    assert answers == [SatStatus.SAT, SatStatus.UNSAT, SatStatus.SAT, SatStatus.UNSAT, SatStatus.SAT]


def test_selectors_do_not_clash_with_formula_variables(example1):
    instance = SatInstance(example1)
    assert [instance.selector(i) for i in example1.indices] == [3, 4, 5, 6]
    assert instance.index_of(-5) == 3
    with pytest.raises(ValueError):
        instance.selector(5)


def test_empty_clause_is_its_own_core():
    formula = CnfFormula.from_clauses([[1], []])
    outcome = solve(SatInstance(formula), {1, 2})
    assert outcome.is_unsat
    assert outcome.failed_assumptions == {2}


def test_conflict_budget_reports_unknown():
    solver = SatSolver()
    for clause in pigeonhole(5, 4):
        solver.ensure_vars(max(abs(lit) for lit in clause))
        solver.add_clause(clause)
    assert solver.solve(budget=SatBudget(conflicts=1)).status is SatStatus.UNKNOWN
    assert solver.solve().status is SatStatus.UNSAT


def test_expired_deadline_is_not_a_wrong_answer():
    formula = CnfFormula.from_clauses(pigeonhole(4, 3))
    outcome = SatInstance(formula).solve(formula.indices, SatBudget(deadline=0.0))
    assert outcome.status in (SatStatus.UNKNOWN, SatStatus.UNSAT)


def test_at_most_outputs_cap_true_literals():
    solver = SatSolver(nvars=4)
    outputs = at_most_outputs(solver, [1, 2, 3, 4], 2)
    assert solver.nvars > 4
    assert solver.solve([-outputs[1], 1, 2, 3]).status is SatStatus.UNSAT
    result = solver.solve([-outputs[1], 1])
    assert result.status is SatStatus.SAT
    assert sum(result.model[v] for v in (1, 2, 3, 4)) <= 2


def test_at_most_outputs_over_negated_literals():
    solver = SatSolver(nvars=3)
    outputs = at_most_outputs(solver, [-1, -2, -3], 0)
    result = solver.solve([-outputs[0]])
    assert result.status is SatStatus.SAT
    assert all(result.model[v] for v in (1, 2, 3))
    assert at_most_outputs(solver, [], 0) == []


def test_narrowed_budget_keeps_the_earlier_deadline():
    budget = SatBudget(deadline=0.0)
    assert budget.narrowed(60.0).deadline == 0.0
    assert budget.narrowed(conflicts=5).conflicts == 5
    assert SatBudget().narrowed(60.0).remaining() > 0
    assert budget.remaining() == 0.0


def test_luby_prefix():
    assert [_luby(i) for i in range(9)] == [1, 1, 2, 1, 1, 2, 4, 1, 1]


def test_seeded_solvers_agree(example1):
    first = SatInstance(example1, seed=5).solve({3, 4})
    second = SatInstance(example1, seed=5).solve({3, 4})
    assert first.model == second.model


clause_lists = st.lists(
    st.lists(st.integers(min_value=-8, max_value=8).filter(bool), min_size=0, max_size=4),
    min_size=0,
    max_size=14,
)


@hypothesis_settings(max_examples=150, deadline=None)
@given(clause_lists)
def test_agrees_with_truth_table(clauses):
    formula = CnfFormula.from_clauses(clauses)
    instance = SatInstance(formula)
    outcome = instance.solve(formula.indices)
    expected = truth_table_sat(formula, formula.indices)
    assert outcome.is_sat == expected
    if outcome.is_sat:
        assert evaluate(formula, outcome.model) is Evaluation.SATISFIED
    else:
        assert not truth_table_sat(formula, outcome.failed_assumptions)


def test_truth_table_agreement_on_twelve_variables():
    rng = random.Random(12)
    for _ in range(40):
        clauses = [
            [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, 13), 3)]
            for _ in range(rng.randint(40, 60))
        ]
        formula = CnfFormula.from_clauses(clauses, nvars=12)
        assert SatInstance(formula).solve(formula.indices).is_sat == truth_table_sat(formula, formula.indices)


def test_model_is_total_on_formula_variables(example1):
    outcome = SatInstance(example1).solve({3})
    assert set(outcome.model.values) == {1, 2}
