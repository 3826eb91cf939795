"""Ground ASP value types: atoms, rules of the two supported forms, programs
and interpretations. An empty head is a constraint; empty bodies are facts."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

_NAME_PATTERNS = (
    (re.compile(r"cls_(\d+)$"), "cls"),
    (re.compile(r"pos_x(\d+)$"), "pos"),
    (re.compile(r"neg_x(\d+)$"), "neg"),
)


class AtomKind(str, enum.Enum):
    UNSAT = "unsat"
    POS = "pos"
    NEG = "neg"
    CLS = "cls"
    OTHER = "other"


_KIND_ORDER = {AtomKind.UNSAT: 0, AtomKind.POS: 1, AtomKind.NEG: 1, AtomKind.CLS: 2, AtomKind.OTHER: 3}


@dataclass(frozen=True, slots=True)
class Atom:
    kind: AtomKind
    index: int = 0
    name: str = ""

    def __str__(self) -> str:
        if self.kind is AtomKind.CLS:
            return f"cls_{self.index}"
        if self.kind is AtomKind.POS:
            return f"pos_x{self.index}"
        if self.kind is AtomKind.NEG:
            return f"neg_x{self.index}"
        if self.kind is AtomKind.UNSAT:
            return "unsat"
        return self.name

    @property
    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.index, self.kind.value, self.name)

    @classmethod
    def parse(cls, text: str) -> "Atom":
        if text == "unsat":
            return UNSAT
        for pattern, kind in _NAME_PATTERNS:
            m = pattern.match(text)
            if m:
                return Atom(AtomKind(kind), int(m.group(1)))
        return other(text)


UNSAT = Atom(AtomKind.UNSAT)


def cls_atom(index: int) -> Atom:
    return Atom(AtomKind.CLS, index)


def pos_atom(variable: int) -> Atom:
    return Atom(AtomKind.POS, variable)


def neg_atom(variable: int) -> Atom:
    return Atom(AtomKind.NEG, variable)


def other(name: str) -> Atom:
    return Atom(AtomKind.OTHER, name=name)


class RuleForm(str, enum.Enum):
    DISJUNCTIVE = "disjunctive"
    CARDINALITY = "cardinality"


@dataclass(frozen=True)
class AspRule:
    form: RuleForm
    head: tuple[Atom, ...] = ()
    body_pos: tuple[Atom, ...] = ()
    body_neg: tuple[Atom, ...] = ()
    lb: int = 0
    # which part of the encoding produced the rule; used for grouping in emitted text
    origin: str = field(default="", compare=False)

    def __post_init__(self):
        if self.form is RuleForm.CARDINALITY and not 0 <= self.lb <= len(self.head):
            raise ValueError(f"Cardinality bound {self.lb} outside 0..{len(self.head)}")
        if self.form is RuleForm.DISJUNCTIVE and self.lb:
            raise ValueError("Disjunctive rules carry no lower bound")

    @property
    def is_constraint(self) -> bool:
        return self.form is RuleForm.DISJUNCTIVE and not self.head

    @property
    def atoms(self) -> set[Atom]:
        return {*self.head, *self.body_pos, *self.body_neg}

    @classmethod
    def disjunctive(
        cls, head: Iterable[Atom], pos: Iterable[Atom] = (), neg: Iterable[Atom] = (), origin: str = ""
    ) -> "AspRule":
        return cls(RuleForm.DISJUNCTIVE, _dedup(head), _dedup(pos), _dedup(neg), origin=origin)

    @classmethod
    def constraint(cls, pos: Iterable[Atom] = (), neg: Iterable[Atom] = (), origin: str = "") -> "AspRule":
        return cls(RuleForm.DISJUNCTIVE, (), _dedup(pos), _dedup(neg), origin=origin)

    @classmethod
    def cardinality(
        cls,
        head: Iterable[Atom],
        lb: int = 0,
        pos: Iterable[Atom] = (),
        neg: Iterable[Atom] = (),
        origin: str = "",
    ) -> "AspRule":
        return cls(RuleForm.CARDINALITY, _dedup(head), _dedup(pos), _dedup(neg), lb, origin=origin)


def _dedup(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    return tuple(dict.fromkeys(atoms))


@dataclass(frozen=True)
class AspProgram:
    rules: tuple[AspRule, ...] = ()

    @cached_property
    def atoms(self) -> frozenset[Atom]:
        return frozenset(a for rule in self.rules for a in rule.atoms)

    def __len__(self) -> int:
        return len(self.rules)

    def extend(self, rules: Iterable[AspRule]) -> "AspProgram":
        return AspProgram(self.rules + tuple(rules))

    def by_origin(self, origin: str) -> list[AspRule]:
        return [r for r in self.rules if r.origin == origin]


@dataclass(frozen=True)
class Interpretation:
    true_atoms: frozenset[Atom] = frozenset()

    def __contains__(self, atom: Atom) -> bool:
        return atom in self.true_atoms

    def __len__(self) -> int:
        return len(self.true_atoms)

    def project(self, atoms: Iterable[Atom]) -> frozenset[Atom]:
        return self.true_atoms & frozenset(atoms)

    @property
    def selected_clauses(self) -> frozenset[int]:
        return frozenset(a.index for a in self.true_atoms if a.kind is AtomKind.CLS)

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> "Interpretation":
        return cls(frozenset(atoms))
