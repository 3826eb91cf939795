"""CNF value types.

Literals are signed DIMACS integers. Everything here is immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence


@dataclass(frozen=True, slots=True)
class Clause:
    index: int
    literals: tuple[int, ...]


def normalize_literals(literals: Iterable[int]) -> tuple[int, ...]:
    """Drop repeated literals, keeping first occurrence order."""
    return tuple(dict.fromkeys(literals))


@dataclass(frozen=True, slots=True)
class CnfFormula:
    nvars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause.literals:
                if abs(lit) > self.nvars:
                    raise ValueError(
                        f"Clause {clause.index} uses variable {abs(lit)} beyond nvars={self.nvars}"
                    )

    @property
    def ncl(self) -> int:
        return len(self.clauses)

    @property
    def indices(self) -> range:
        return range(1, self.ncl + 1)

    @property
    def variables(self) -> list[int]:
        """Var(F): the variables that occur in some clause, ascending."""
        return sorted({abs(lit) for clause in self.clauses for lit in clause.literals})

    def clause(self, index: int) -> Clause:
        return self.clauses[index - 1]

    @classmethod
    def from_clauses(cls, clauses: Sequence[Sequence[int]], nvars: Optional[int] = None) -> "CnfFormula":
        built = tuple(
            Clause(index=i, literals=normalize_literals(lits))
            for i, lits in enumerate(clauses, start=1)
        )
        used = max((abs(lit) for c in built for lit in c.literals), default=0)
        return cls(nvars=max(used, nvars or 0), clauses=built)


@dataclass(frozen=True)
class Assignment:
    """Partial map from variables to truth values."""

    values: Mapping[int, bool] = field(default_factory=dict)

    def value(self, lit: int) -> Optional[bool]:
        val = self.values.get(abs(lit))
        if val is None:
            return None
        return val if lit > 0 else not val

