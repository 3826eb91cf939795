import enum
import logging
from pathlib import Path
from typing import Union

from muskit.models.cnf import Assignment, Clause, CnfFormula, normalize_literals

logger = logging.getLogger(__name__)


class DimacsParseError(ValueError):
    """Raised for malformed DIMACS input; `line` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Evaluation(str, enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


def parse_dimacs(text: Union[bytes, str]) -> CnfFormula:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DimacsParseError(f"not UTF-8/ASCII text ({e.reason})", 1)

    declared_vars = None
    declared_clauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    current_start = 0
    max_var = 0
    line_no = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB files end the body with a lone '%'
            break
        if line.startswith("p"):
            if declared_vars is not None:
                raise DimacsParseError("duplicate header", line_no)
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise DimacsParseError(f"malformed header '{line}'", line_no)
            try:
                declared_vars = int(fields[2])
                declared_clauses = int(fields[3])
            except ValueError:
                raise DimacsParseError(f"non-integer count in header '{line}'", line_no)
            if declared_vars < 0 or declared_clauses < 0:
                raise DimacsParseError(f"negative count in header '{line}'", line_no)
            continue
        if declared_vars is None:
            raise DimacsParseError("clause data before 'p cnf' header", line_no)

        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsParseError(f"non-integer token '{token}'", line_no)
            if lit == 0:
                clauses.append(current)
                current = []
                continue
            if not current:
                current_start = line_no
            current.append(lit)
            max_var = max(max_var, abs(lit))

    if current:
        raise DimacsParseError("final clause is not terminated by 0", current_start)
    if declared_vars is None:
        raise DimacsParseError("missing 'p cnf' header", max(line_no, 1))

    if max_var > declared_vars:
        logger.warning(f"Literal uses variable {max_var} beyond declared nvars={declared_vars}; raising nvars")
    if declared_clauses != len(clauses):
        logger.warning(f"Header declares {declared_clauses} clauses, body has {len(clauses)}; using body")

    formula = CnfFormula(
        nvars=max(declared_vars, max_var),
        clauses=tuple(
            Clause(index=i, literals=normalize_literals(lits))
            for i, lits in enumerate(clauses, start=1)
        ),
    )
    logger.debug(f"Parsed DIMACS: nvars={formula.nvars}, ncl={formula.ncl}")
    return formula


def serialize_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.nvars} {formula.ncl}"]
    for clause in formula.clauses:
        lines.append(" ".join([*map(str, clause.literals), "0"]))
    return "\n".join(lines) + "\n"


def read_dimacs(path: Union[str, Path]) -> CnfFormula:
    return parse_dimacs(Path(path).read_bytes())


def write_dimacs(path: Union[str, Path], formula: CnfFormula) -> None:
    Path(path).write_text(serialize_dimacs(formula), encoding="ascii", newline="\n")


def evaluate(formula: CnfFormula, assignment: Assignment) -> Evaluation:
    undetermined = False
    for clause in formula.clauses:
        status = _clause_status(clause, assignment)
        if status is Evaluation.FALSIFIED:
            return Evaluation.FALSIFIED
        if status is Evaluation.UNDETERMINED:
            undetermined = True
    return Evaluation.UNDETERMINED if undetermined else Evaluation.SATISFIED


def _clause_status(clause: Clause, assignment: Assignment) -> Evaluation:
    open_literal = False
    for lit in clause.literals:
        val = assignment.value(lit)
        if val is True:
            return Evaluation.SATISFIED
        if val is None:
            open_literal = True
    return Evaluation.UNDETERMINED if open_literal else Evaluation.FALSIFIED


def satisfied_clauses(formula: CnfFormula, assignment: Assignment) -> set[int]:
    return {
        clause.index
        for clause in formula.clauses
        if _clause_status(clause, assignment) is Evaluation.SATISFIED
    }
