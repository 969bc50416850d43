"""Explanations and justification trees built from recording atoms."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .engine import AnswerSet, evaluate, literal_holds
from .errors import ArityMismatchError, DepthExceededError, NotInAnswerSetError, XaspError
from .instrument import (
    DEFAULT_RECORDING_PREDICATE,
    InstrumentedProgram,
    instrument_program,
    projected_vars,
)
from .syntax import (
    Atom,
    Number,
    Program,
    Variable,
    atom_key,
    substitute_atom,
    substitute_literal,
    term_key,
)


@dataclass(frozen=True)
class Explanation:
    """A fired ground rule instance supporting ``head``."""

    head: Atom
    rule_id: int
    theta: dict
    positive_body: tuple
    test_body: tuple

    def __hash__(self):
        return hash((self.head, self.rule_id, self.positive_body, self.test_body))

    @property
    def sort_key(self):
        return (self.rule_id, tuple(term_key(v) for v in self.theta.values()))


@dataclass(frozen=True)
class RuleInstance:
    rule_id: int
    theta: dict

    def __hash__(self):
        return hash((self.rule_id, tuple(self.theta.items())))


FACT = "fact"


@dataclass(frozen=True)
class JustificationTree:
    root: Atom
    support: Union[str, RuleInstance]
    children: tuple = ()
    test_leaves: tuple = ()

    @property
    def is_fact(self) -> bool:
        return self.support == FACT

    def node_count(self) -> int:
        """Atom nodes plus test leaves."""
        return 1 + len(self.test_leaves) + sum(c.node_count() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def atoms(self):
        yield self.root
        for child in self.children:
            yield from child.atoms()


# --------------------------------------------------------------------------

def strip_extension(answer_set: AnswerSet, predicate: str = DEFAULT_RECORDING_PREDICATE) -> AnswerSet:
    """Drop every recording atom, keeping the metadata of the rest."""
    return answer_set.restrict(lambda a: a.name != predicate)


def extract_substitution(recording_atom: Atom, rule_id_map) -> tuple[int, dict]:
    if not recording_atom.args or not isinstance(recording_atom.args[0], Number):
        raise ArityMismatchError(f"{recording_atom} does not start with a rule id")
    rule_id = recording_atom.args[0].value
    if rule_id not in rule_id_map:
        raise ArityMismatchError(f"{recording_atom} refers to unknown rule {rule_id}")
    variables = projected_vars(rule_id_map[rule_id])
    values = recording_atom.args[1:]
    if len(values) != len(variables):
        raise ArityMismatchError(
            f"{recording_atom} carries {len(values)} values but rule {rule_id} projects {len(variables)} variables")
    return rule_id, {var.name: val for var, val in zip(variables, values)}


def _explanation(rule, rule_id, theta) -> Explanation:
    return Explanation(
        head=substitute_atom(rule.head, theta),
        rule_id=rule_id,
        theta=theta,
        positive_body=tuple(substitute_atom(a, theta) for a in rule.positive_body),
        test_body=tuple(substitute_literal(t, theta) for t in rule.test_body),
    )


def build_explanations(extended_answer_set: AnswerSet, instrumented: InstrumentedProgram) -> list[Explanation]:
    """One explanation per recording atom, ordered by rule id then bindings."""
    out = []
    for atom in extended_answer_set.atoms:
        if atom.name != instrumented.recording_predicate:
            continue
        rule_id, theta = extract_substitution(atom, instrumented.rule_id_map)
        out.append(_explanation(instrumented.rule(rule_id), rule_id, theta))
    out.sort(key=lambda e: e.sort_key)
    return out


def _pattern_matches(pattern: Atom, atom: Atom) -> bool:
    if pattern.signature != atom.signature:
        return False
    seen = {}
    for p, a in zip(pattern.args, atom.args):
        if isinstance(p, Variable):
            if seen.setdefault(p.name, a) != a:
                return False
        elif p != a:
            return False
    return True


def select_explanations(explanations: Iterable[Explanation], predicates=None,
                        atom: Optional[Atom] = None) -> list[Explanation]:
    """Keep explanations whose head predicate is in ``predicates`` and/or matches ``atom``.

    ``predicates`` is a set of ``(name, arity)`` pairs; ``atom`` may contain
    variables, which match any value (repeated variables must agree).
    """
    out = list(explanations)
    if predicates is not None:
        wanted = set(predicates)
        out = [e for e in out if e.head.signature in wanted]
    if atom is not None:
        out = [e for e in out if _pattern_matches(atom, e.head)]
    return out


def all_supports(atom: Atom, explanations: Iterable[Explanation]) -> list[Explanation]:
    return [e for e in explanations if e.head == atom]


def is_sound(explanation: Explanation, answer_set, consts=None) -> bool:
    """Head and positive body in ``answer_set`` and every test literal true there."""
    atoms = answer_set.atoms if isinstance(answer_set, AnswerSet) else answer_set
    if explanation.head not in atoms:
        return False
    if any(a not in atoms for a in explanation.positive_body):
        return False
    return all(literal_holds(t, atoms, {}, consts) for t in explanation.test_body)


def build_justification_tree(atom: Atom, explanations: Iterable[Explanation], answer_set: AnswerSet,
                             max_depth: Optional[int] = None) -> JustificationTree:
    """Unfold the canonical support of ``atom`` down to facts.

    A support is eligible only if all its positive body atoms were derived
    strictly earlier (by stratum, then round) than the atom it supports, so
    the tree is finite even under positive recursion. Among eligible supports
    the smallest rule id, then the smallest bindings, wins.
    """
    if atom not in answer_set:
        raise NotInAnswerSetError(f"{atom} is not in the answer set")
    by_head = defaultdict(list)
    for e in explanations:
        by_head[e.head].append(e)
    for supports in by_head.values():
        supports.sort(key=lambda e: e.sort_key)
    return _unfold(atom, by_head, answer_set, max_depth, 1)


def _unfold(atom, by_head, answer_set, max_depth, depth) -> JustificationTree:
    if max_depth is not None and depth > max_depth:
        raise DepthExceededError(f"justification of {atom} is deeper than {max_depth}")
    meta = answer_set.meta[atom]
    if meta.is_fact:
        return JustificationTree(atom, FACT)
    for e in by_head.get(atom, ()):
        if all(b in answer_set.meta and answer_set.meta[b].order < meta.order for b in e.positive_body):
            children = tuple(_unfold(b, by_head, answer_set, max_depth, depth + 1) for b in e.positive_body)
            return JustificationTree(atom, RuleInstance(e.rule_id, e.theta), children, e.test_body)
    raise XaspError(f"no well-founded explanation available for {atom}")


# --------------------------------------------------------------------------

@dataclass
class ExplainResult:
    """Everything the explanation workflow produces for one program."""

    instrumented: InstrumentedProgram
    extended_answer_set: AnswerSet
    answer_set: AnswerSet
    explanations: list = field(default_factory=list)


def explain_program(program: Program, predicate: str = DEFAULT_RECORDING_PREDICATE,
                    number_facts: bool = False) -> ExplainResult:
    """Instrument, evaluate the extended program, and extract explanations."""
    instrumented = instrument_program(program, predicate, number_facts)
    extended = evaluate(instrumented.extended)
    return ExplainResult(
        instrumented=instrumented,
        extended_answer_set=extended,
        answer_set=strip_extension(extended, predicate),
        explanations=build_explanations(extended, instrumented),
    )


def sorted_atoms(atoms) -> list[Atom]:
    return sorted(atoms, key=atom_key)
