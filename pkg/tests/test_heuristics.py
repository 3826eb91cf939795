import logging
import random
import time

import pytest

from muskit.core.config import settings
from muskit.core.satcore import SatBudget, SatInstance
from muskit.models.cnf import Assignment, CnfFormula
from muskit.schemas.encoding import HeuristicFlags
from muskit.schemas.heuristics import CoverRule, HeuristicBundle
from muskit.services.generators import random_kcnf
from muskit.services.heuristics import (
    UnionFind,
    build_bundle,
    card_bounds,
    components,
    cover_rules,
    enumerate_mcs,
    grow,
    max_satisfiable_count,
    minimal_hitting_sets,
    minimum_hitting_set,
    union_overapprox,
)
from tests.conftest import EXAMPLE1_MCSES, EXAMPLE1_MUSES, brute_force_mcses, brute_force_muses, truth_table_sat


def test_union_find_groups():
    uf = UnionFind([1, 2, 3, 4, 5])
    uf.union(1, 3)
    uf.union(5, 3)
    assert uf.groups() == [frozenset({1, 3, 5}), frozenset({2}), frozenset({4})]


def test_components_example1(example1):
    assert components(example1) == [frozenset({1, 2, 3, 4})]


def test_components_split_on_independent_variables():
    formula = CnfFormula.from_clauses([[1], [-1], [2], [-2]])
    assert components(formula) == [frozenset({1, 2}), frozenset({3, 4})]


def test_components_need_complementary_literals():
    formula = CnfFormula.from_clauses([[1, 2], [1], [-2]])
    assert components(formula) == [frozenset({1, 3}), frozenset({2})]


def test_enumerate_mcs_example1(example1):
    collection = enumerate_mcs(example1)
    assert collection.complete
    assert not collection.satisfiable
    assert set(collection.mcses) == EXAMPLE1_MCSES


def test_enumerate_mcs_on_satisfiable_formula():
    collection = enumerate_mcs(CnfFormula.from_clauses([[1, 2], [-1]]))
    assert collection.satisfiable
    assert collection.complete
    assert collection.mcses == []


def test_enumerate_mcs_step_cap(example1):
    collection = enumerate_mcs(example1, max_count=1)
    assert len(collection.mcses) == 1
    assert not collection.complete
    assert collection.mcses[0] in EXAMPLE1_MCSES


def test_grow_reaches_maximal_satisfiable_subset(example1):
    instance = SatInstance(example1)
    grown = grow(instance, Assignment({1: False, 2: False}))
    assert grown == frozenset({2, 3, 4})
    assert frozenset(example1.indices) - grown in EXAMPLE1_MCSES


def test_union_overapprox_example1(example1):
    assert union_overapprox(example1) == frozenset({1, 2, 3, 4})


def test_union_overapprox_drops_autarky_clauses():
    formula = CnfFormula.from_clauses([[1], [-1], [2]])
    assert union_overapprox(formula) == frozenset({1, 2})


def test_union_overapprox_of_satisfiable_formula_is_empty():
    formula = CnfFormula.from_clauses([[1, 2], [-1], [3]])
    assert union_overapprox(formula) == frozenset()


def test_minimum_hitting_set():
    assert minimum_hitting_set(EXAMPLE1_MCSES) == frozenset({1, 2})
    assert minimum_hitting_set([]) == frozenset()
    assert len(minimum_hitting_set([{1, 2}, {3, 4}, {1, 3}, {2, 4}])) == 2


def test_minimal_hitting_sets_are_the_muses():
    assert set(minimal_hitting_sets(EXAMPLE1_MCSES)) == EXAMPLE1_MUSES
    assert minimal_hitting_sets([]) == [frozenset()]
    assert minimal_hitting_sets([{1}, set()]) == []


def test_minimum_hitting_set_rejects_an_empty_member():
    with pytest.raises(ValueError, match="cannot be hit"):
        minimum_hitting_set([{1, 2}, set()])


def test_max_satisfiable_count(example1):
    assert max_satisfiable_count(example1) == 3
    assert max_satisfiable_count(CnfFormula.from_clauses([[1], [2]])) == 2


def test_max_satisfiable_count_stops_at_limit(example1):
    assert 1 <= max_satisfiable_count(example1, limit=1) <= 3


def test_max_satisfiable_count_respects_budget(example1):
    assert max_satisfiable_count(example1, SatBudget(deadline=0.0)) is None


def test_max_satisfiable_count_skips_oversized_totalizer(monkeypatch, example1):
    monkeypatch.setattr(settings, "MAXSAT_MAX_COUNTER_SIZE", 0)
    assert max_satisfiable_count(example1) is None


def test_card_bounds_examples(example1):
    assert card_bounds(example1, EXAMPLE1_MCSES) == (2, 4)
    assert card_bounds(example1, []) == (0, 4)
    pair = CnfFormula.from_clauses([[1], [-1]])
    assert card_bounds(pair, [{1}, {2}]) == (2, 2)


def test_card_bounds_fall_back_to_kernel(monkeypatch, caplog):
    monkeypatch.setattr(settings, "MAXSAT_MAX_CLAUSES", 2)
    formula = CnfFormula.from_clauses([[1], [-1], [2]])
    with caplog.at_level(logging.WARNING):
        assert card_bounds(formula, [{1}, {2}], kernel={1, 2}) == (2, 2)
    assert "MaxSAT bound unavailable" in caplog.text


def test_card_bounds_never_exceed_the_kernel():
    formula = CnfFormula.from_clauses([[1], [-1], [2]])
    assert card_bounds(formula, [{1}, {2}], kernel={1, 2}) == (2, 2)
    assert card_bounds(formula, [{1}, {2}], kernel={1, 2}, budget=SatBudget(deadline=0.0)) == (2, 2)


def test_cover_rules_example1(example1):
    rules = cover_rules(example1)
    assert CoverRule(trigger=1, literal=1, candidates=(2, 4)) in rules
    assert CoverRule(trigger=3, literal=2, candidates=(4,)) in rules
    assert not any(r.is_exclusion for r in rules)


def test_cover_rules_exclusion():
    formula = CnfFormula.from_clauses([[1], [-1], [-2]])
    rules = cover_rules(formula)
    assert CoverRule(trigger=3, literal=-2, candidates=()) in rules
    assert [r.trigger for r in rules if r.is_exclusion] == [3]


def test_bundle_bounds_are_validated():
    with pytest.raises(ValueError):
        HeuristicBundle(ncl=2, card_bounds=(3, 2))


def test_build_bundle_only_computes_requested_artifacts(example1):
    bundle = build_bundle(example1, HeuristicFlags(h3=True))
    assert bundle.components == [frozenset({1, 2, 3, 4})]
    assert bundle.union_overapprox is None
    assert bundle.card_bounds is None
    assert bundle.mcses is None
    assert bundle.cover_rules is None


def test_build_bundle_example1(example1):
    bundle = build_bundle(example1)
    assert bundle.union_overapprox == frozenset({1, 2, 3, 4})
    assert bundle.card_bounds == (2, 4)
    assert set(bundle.mcses) == EXAMPLE1_MCSES
    assert bundle.mcs_complete
    summary = bundle.summary()
    assert summary.component_count == 1
    assert summary.exclusions == 0


def test_bundle_only_drops_disabled_artifacts(example1):
    bundle = build_bundle(example1).only(HeuristicFlags(h1=True, h4=True))
    assert bundle.union_overapprox is not None
    assert bundle.mcses is not None
    assert bundle.card_bounds is None
    assert bundle.components is None
    assert bundle.cover_rules is None


def assert_bundle_is_safe(formula: CnfFormula, bundle: HeuristicBundle) -> None:
    lb, ub = bundle.card_bounds
    component_of = bundle.component_of()
    for mus in brute_force_muses(formula):
        assert mus <= bundle.union_overapprox
        assert lb <= len(mus) <= ub
        assert len({component_of[i] for i in mus}) == 1
        assert all(mus & mcs for mcs in bundle.mcses)
        for rule in bundle.cover_rules:
            if rule.trigger in mus:
                assert not rule.is_exclusion
                assert mus & set(rule.candidates)


def test_bundles_never_exclude_a_mus(unsat_corpus):
    for formula in unsat_corpus:
        assert_bundle_is_safe(formula, build_bundle(formula))


@pytest.mark.slow
def test_bundles_are_safe_on_larger_formulas(scaleup_corpus):
    for formula in scaleup_corpus[:80]:
        if truth_table_sat(formula, formula.indices):
            continue
        assert_bundle_is_safe(formula, build_bundle(formula))


def test_mcs_enumeration_matches_brute_force(small_corpus):
    for formula in small_corpus[:200]:
        collection = enumerate_mcs(formula)
        assert collection.complete
        assert set(collection.mcses) == brute_force_mcses(formula)
        assert collection.satisfiable == truth_table_sat(formula, formula.indices)


def test_hitting_set_duality(small_corpus):
    for formula in small_corpus:
        if truth_table_sat(formula, formula.indices):
            continue
        assert set(minimal_hitting_sets(brute_force_mcses(formula))) == brute_force_muses(formula)


def test_card_bounds_hold_on_small_corpus(small_corpus):
    for formula in small_corpus:
        collection = enumerate_mcs(formula)
        lb, ub = card_bounds(formula, collection.mcses)
        assert all(lb <= len(mus) <= ub for mus in brute_force_muses(formula))


def test_build_bundle_shares_one_deadline():
    formula = random_kcnf(250, 1000, 3, random.Random(7))
    started = time.monotonic()
    bundle = build_bundle(formula, timeout=0.5)
    elapsed = time.monotonic() - started
    assert elapsed < 3.0
    lb, ub = bundle.card_bounds
    assert 0 <= lb <= ub <= len(bundle.union_overapprox)
