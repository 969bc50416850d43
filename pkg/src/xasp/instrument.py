"""Rule instrumentation: companion rules that record which rule instances fired.

For a rule ``A :- B1, ..., Bn, C1, ..., Cm`` with id ``j`` whose head and
positive body mention the variables ``X1, ..., Xk`` the companion rule is::

    rule_fired(j, X1, ..., Xk) :- A, B1, ..., Bn, C1, ..., Cm.

Evaluating the original program together with all companion rules yields the
original answer set plus one recording atom per fired ground instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .engine import expand_intervals
from .errors import ReservedPredicateError
from .syntax import (
    Atom,
    CountEquality,
    Negated,
    Number,
    Positive,
    Program,
    Rule,
    Variable,
    atom_vars,
)

DEFAULT_RECORDING_PREDICATE = "rule_fired"


@dataclass(frozen=True)
class InstrumentedProgram:
    original: Program
    fired_rules: tuple
    extended: Program
    rule_id_map: dict = field(default_factory=dict)
    recording_predicate: str = DEFAULT_RECORDING_PREDICATE

    def rule(self, rule_id: int) -> Rule:
        return self.rule_id_map[rule_id]


def number_rules(program: Program, number_facts: bool = False) -> Program:
    """Assign consecutive ids (from 1, in source order) to the non-fact rules.

    With ``number_facts`` every statement is numbered; interval facts are
    expanded first so that each numbered fact is ground.
    """
    if number_facts:
        program = expand_intervals(program)
    statements = []
    next_id = 1
    for rule in program.statements:
        if rule.is_fact and not number_facts:
            statements.append(replace(rule, rule_id=None))
        else:
            statements.append(replace(rule, rule_id=next_id))
            next_id += 1
    return replace(program, statements=tuple(statements))


def partition_body(rule: Rule) -> tuple[list, list]:
    return rule.positive_body, rule.test_body


def projected_vars(rule: Rule) -> list[Variable]:
    """Distinct variables of the head then the positive body, by first occurrence."""
    seen = {}
    for atom in [rule.head, *rule.positive_body]:
        for var in atom_vars(atom):
            seen.setdefault(var, None)
    return list(seen)


def instrument_rule(rule: Rule, predicate: str = DEFAULT_RECORDING_PREDICATE) -> Rule:
    if rule.rule_id is None:
        raise ValueError(f"rule `{rule}` has no rule id")
    head = Atom(predicate, (Number(rule.rule_id), *projected_vars(rule)))
    return Rule(head=head, body=(Positive(rule.head), *rule.body),
                source_index=rule.source_index, rule_id=None)


def _mentions(program: Program, predicate: str) -> bool:
    if any(name == predicate for name, _ in program.shows):
        return True
    for rule in program.statements:
        atoms = [rule.head]
        for lit in rule.body:
            if isinstance(lit, (Positive, Negated)):
                atoms.append(lit.atom)
            elif isinstance(lit, CountEquality):
                atoms.append(lit.condition)
        if any(a.name == predicate for a in atoms):
            return True
    return False


def instrument_program(program: Program, predicate: str = DEFAULT_RECORDING_PREDICATE,
                       number_facts: bool = False) -> InstrumentedProgram:
    """Build the extended program: the original statements followed by their companions."""
    if _mentions(program, predicate):
        raise ReservedPredicateError(
            f"predicate {predicate!r} already occurs in the program; choose another recording predicate")
    numbered = number_rules(program, number_facts)
    id_rules = sorted((r for r in numbered.statements if r.rule_id is not None), key=lambda r: r.rule_id)
    fired = tuple(instrument_rule(r, predicate) for r in id_rules)
    shows = numbered.shows
    if shows:
        arities = sorted({r.head.signature for r in fired})
        shows = shows + tuple(sig for sig in arities if sig not in shows)
    last = max((r.source_index for r in numbered.statements), default=-1)
    fired_positioned = tuple(replace(r, source_index=last + 1 + i) for i, r in enumerate(fired))
    extended = replace(numbered, statements=numbered.statements + fired_positioned, shows=shows)
    return InstrumentedProgram(
        original=numbered,
        fired_rules=fired_positioned,
        extended=extended,
        rule_id_map={r.rule_id: r for r in id_rules},
        recording_predicate=predicate,
    )
