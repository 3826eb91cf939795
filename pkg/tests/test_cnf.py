import logging
from itertools import product

import pytest

from muskit.models.cnf import Assignment, CnfFormula
from muskit.services.cnf import (
    DimacsParseError,
    Evaluation,
    evaluate,
    parse_dimacs,
    read_dimacs,
    serialize_dimacs,
    write_dimacs,
)
from tests.conftest import EXAMPLE1_DIMACS


def test_parse_example1(example1):
    assert example1.nvars == 2
    assert example1.ncl == 4
    assert [c.literals for c in example1.clauses] == [(1,), (-1,), (2,), (-1, -2)]
    assert [c.index for c in example1.clauses] == [1, 2, 3, 4]


def test_parse_bytes_and_crlf():
    formula = parse_dimacs(EXAMPLE1_DIMACS.replace("\n", "\r\n").encode())
    assert formula == parse_dimacs(EXAMPLE1_DIMACS)


def test_parse_empty_formula():
    formula = parse_dimacs("p cnf 0 0\n")
    assert formula.ncl == 0
    assert formula.nvars == 0


def test_parse_keeps_duplicate_clauses():
    formula = parse_dimacs("p cnf 1 2\n1 0\n1 0\n")
    assert formula.ncl == 2
    assert formula.clause(1).literals == formula.clause(2).literals == (1,)
    assert formula.clause(1) != formula.clause(2)


def test_parse_comments_and_multiline_clause():
    formula = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0\n-3 0\n%\n0\n")
    assert [c.literals for c in formula.clauses] == [(1, -2, 3), (-3,)]


def test_parse_deduplicates_literals():
    formula = parse_dimacs("p cnf 2 1\n1 1 -2 1 0\n")
    assert formula.clause(1).literals == (1, -2)


def test_parse_keeps_tautologies():
    formula = parse_dimacs("p cnf 1 2\n1 -1 0\n1 0\n")
    assert formula.ncl == 2
    assert formula.clause(1).literals == (1, -1)


def test_parse_empty_clause():
    formula = parse_dimacs("p cnf 1 2\n1 0\n0\n")
    assert formula.clause(2).literals == ()


def test_header_mismatch_warns(caplog):
    with caplog.at_level(logging.WARNING):
        formula = parse_dimacs("p cnf 2 3\n1 0\n-2 0\n")
    assert formula.ncl == 2
    assert "Header declares 3 clauses" in caplog.text


def test_variable_beyond_header_raises_nvars(caplog):
    with caplog.at_level(logging.WARNING):
        formula = parse_dimacs("p cnf 1 1\n1 5 0\n")
    assert formula.nvars == 5
    assert "beyond declared nvars" in caplog.text


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("p cnf x 2\n1 0\n", 1, "non-integer count"),
        ("p dnf 1 1\n1 0\n", 1, "malformed header"),
        ("p cnf 1 1\np cnf 1 1\n", 2, "duplicate header"),
        ("1 0\np cnf 1 1\n", 1, "before 'p cnf'"),
        ("p cnf 2 1\n1 a 0\n", 2, "non-integer token"),
        ("p cnf 2 2\n1 0\n2\n-1\n", 3, "not terminated"),
        ("c only a comment\n", 1, "missing 'p cnf'"),
    ],
)
def test_parse_errors_carry_line(text, line, message):
    with pytest.raises(DimacsParseError, match=message) as exc_info:
        parse_dimacs(text)
    assert exc_info.value.line == line


def test_round_trip_is_fixpoint(example1, small_corpus):
    for formula in [example1, *small_corpus[:50]]:
        once = parse_dimacs(serialize_dimacs(formula))
        assert once == formula
        assert parse_dimacs(serialize_dimacs(once)) == once


def test_write_uses_lf(tmp_path, example1):
    path = tmp_path / "out.cnf"
    write_dimacs(path, example1)
    assert b"\r" not in path.read_bytes()
    assert read_dimacs(path) == example1


def test_from_clauses_rejects_unknown_variables():
    with pytest.raises(ValueError, match="beyond nvars"):
        CnfFormula(nvars=1, clauses=CnfFormula.from_clauses([[2]]).clauses)


def test_evaluate_examples(example1):
    assert evaluate(example1, Assignment({1: False, 2: True})) is Evaluation.FALSIFIED
    assert evaluate(example1, Assignment({1: False})) is Evaluation.FALSIFIED
    single = CnfFormula.from_clauses([[2]])
    assert evaluate(single, Assignment({2: True})) is Evaluation.SATISFIED
    assert evaluate(single, Assignment()) is Evaluation.UNDETERMINED


def test_total_assignments_never_undetermined(small_corpus):
    for formula in small_corpus[:40]:
        for values in product((False, True), repeat=formula.nvars):
            tau = Assignment(dict(enumerate(values, start=1)))
            assert evaluate(formula, tau) in (Evaluation.SATISFIED, Evaluation.FALSIFIED)


def test_variables_are_occurring_ones():
    formula = CnfFormula.from_clauses([[3], [-1]], nvars=4)
    assert formula.variables == [1, 3]
    assert formula.nvars == 4
