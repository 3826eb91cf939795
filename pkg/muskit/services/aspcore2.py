"""Reader for the ground ASP-Core-2 subset written by `emit_aspcore2`.

Understands disjunctive rules, constraints, `lb { ... } [ub]` choice heads with
an optional body, `%` comments and the `% --- ... ---` group banners. Directive
lines (`#show`, `#heuristic`) are skipped.
"""
import logging
import re
from dataclasses import replace
from typing import List, Optional, Tuple

from muskit.models.asp import AspProgram, AspRule, Atom, RuleForm
from muskit.services.encoder import BANNERS, SELECT, upper_bound_constraints

logger = logging.getLogger(__name__)

_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*$")
_CHOICE = re.compile(r"^(\d+)\s*\{(.*)\}\s*(\d+)?$", re.DOTALL)
_ORIGIN_BY_BANNER = {f"% --- {text} ---": origin for origin, text in BANNERS.items()}


class AspParseError(ValueError):
    """Text outside the supported ground subset"""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _atom(text: str, line: int) -> Atom:
    text = text.strip()
    if not _ATOM.match(text):
        raise AspParseError(f"Invalid atom {text!r}", line)
    return Atom.parse(text)


def _split(text: str, sep: str) -> List[str]:
    return [part.strip() for part in text.split(sep) if part.strip()]


def _body(text: str, line: int) -> Tuple[List[Atom], List[Atom]]:
    pos: List[Atom] = []
    neg: List[Atom] = []
    if text.strip() == "#true":
        return pos, neg
    for literal in _split(text, ","):
        if literal.startswith("not "):
            neg.append(_atom(literal[4:], line))
        else:
            pos.append(_atom(literal, line))
    return pos, neg


def _rule(statement: str, line: int, origin: str) -> Tuple[AspRule, Optional[int]]:
    head_text, sep, body_text = statement.partition(":-")
    pos, neg = _body(body_text, line) if sep else ([], [])
    if sep and not body_text.strip():
        raise AspParseError("Empty rule body after ':-'", line)
    head_text = head_text.strip()

    choice = _CHOICE.match(head_text)
    if choice:
        head = [_atom(a, line) for a in _split(choice.group(2), ";")]
        lb = int(choice.group(1))
        if lb > len(head):
            raise AspParseError(f"Lower bound {lb} above head size {len(head)}", line)
        ub = int(choice.group(3)) if choice.group(3) is not None else None
        return AspRule.cardinality(head, lb, pos, neg, origin=origin), ub
    if "{" in head_text or "}" in head_text:
        raise AspParseError(f"Malformed choice head {head_text!r}", line)
    head = [_atom(a, line) for a in _split(head_text, "|")]
    if not head and not sep:
        raise AspParseError("Empty statement", line)
    return AspRule.disjunctive(head, pos, neg, origin=origin), None


def parse_aspcore2(text: str) -> AspProgram:
    rules: List[AspRule] = []
    origin = ""
    pending = ""
    start = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not pending:
            if not stripped or stripped.startswith("#"):
                continue
            if stripped.startswith("%"):
                origin = _ORIGIN_BY_BANNER.get(stripped, origin)
                continue
            start = number
        pending = f"{pending} {stripped}".strip()
        if not pending.endswith("."):
            continue
        rule, ub = _rule(pending[:-1], start, origin)
        pending = ""
        if rule.form is RuleForm.CARDINALITY and not origin and not (rule.body_pos or rule.body_neg):
            rule = replace(rule, origin=SELECT)
        rules.append(rule)
        if ub is not None and rule.origin == SELECT:
            if ub < rule.lb:
                raise AspParseError(f"Upper bound {ub} below lower bound {rule.lb}", start)
            rules.extend(upper_bound_constraints(rule.head, ub))
    if pending:
        raise AspParseError("Unterminated statement", start)
    logger.debug(f"Parsed {len(rules)} rules")
    return AspProgram(tuple(rules))
