"""Stratification and bottom-up evaluation of stratified programs.

Evaluation proceeds stratum by stratum. Inside a stratum, rule instances are
found by joining the positive body against the atoms known so far (semi-naive
from the second round on) and then checking the test literals, which only
refer to predicates of strictly lower strata.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple, Optional

from .errors import UnknownConstError, UnsafeProgramError, UnstratifiableError
from .syntax import (
    Atom,
    Comparison,
    CountEquality,
    Interval,
    Negated,
    Number,
    Positive,
    Program,
    Rule,
    Symbol,
    Variable,
    atom_key,
    resolve_consts,
    safety_check,
    substitute_atom,
    substitute_term,
    term_key,
)

logger = logging.getLogger(__name__)

Signature = tuple  # (name, arity)
Substitution = Mapping[str, object]

POSITIVE = "positive"
TEST = "test"


# --------------------------------------------------------------------------
# Dependency graph and strata

@dataclass
class DependencyGraph:
    nodes: set = field(default_factory=set)
    # head signature -> body signature -> set of labels
    edges: dict = field(default_factory=lambda: defaultdict(dict))

    def add_edge(self, head, body, label):
        self.nodes.update((head, body))
        self.edges[head].setdefault(body, set()).add(label)

    def successors(self, node):
        return sorted(self.edges.get(node, {}))

    def labels(self, head, body) -> set:
        return self.edges.get(head, {}).get(body, set())

    def edge_list(self) -> list[tuple]:
        return sorted(
            (h, b, label)
            for h, targets in self.edges.items()
            for b, labels in targets.items()
            for label in labels
        )


def dependency_graph(program: Program) -> DependencyGraph:
    graph = DependencyGraph()
    for rule in program.statements:
        head = rule.head.signature
        graph.nodes.add(head)
        for lit in rule.body:
            if isinstance(lit, Positive):
                graph.add_edge(head, lit.atom.signature, POSITIVE)
            elif isinstance(lit, Negated):
                graph.add_edge(head, lit.atom.signature, TEST)
            elif isinstance(lit, CountEquality):
                graph.add_edge(head, lit.condition.signature, TEST)
    return graph


@dataclass(frozen=True)
class StratificationResult:
    strata: dict
    order: tuple

    def __getitem__(self, signature):
        return self.strata[signature]


def _find_test_cycle(graph: DependencyGraph) -> Optional[list]:
    for head, body, label in graph.edge_list():
        if label != TEST:
            continue
        # Look for a path body -> ... -> head closing the cycle.
        parent = {body: None}
        queue = deque([body])
        while queue:
            node = queue.popleft()
            if node == head:
                path = []
                while node is not None:
                    path.append(node)
                    node = parent[node]
                return [head] + path[::-1]
            for nxt in graph.successors(node):
                if nxt not in parent:
                    parent[nxt] = node
                    queue.append(nxt)
    return None


def stratify(program: Program) -> StratificationResult:
    """Least stratum assignment; raises :class:`UnstratifiableError` on a negative cycle."""
    graph = dependency_graph(program)
    cycle = _find_test_cycle(graph)
    if cycle is not None:
        raise UnstratifiableError(cycle)
    strata = {sig: 0 for sig in graph.nodes}
    changed = True
    while changed:
        changed = False
        for head, targets in graph.edges.items():
            for body, labels in targets.items():
                need = strata[body] + (1 if TEST in labels else 0)
                if strata[head] < need:
                    strata[head] = need
                    changed = True
    return StratificationResult(strata, tuple(sorted(set(strata.values()))))


# --------------------------------------------------------------------------
# Intervals

def expand_intervals(program: Program) -> Program:
    statements = []
    changed = False
    for rule in program.statements:
        positions = [i for i, a in enumerate(rule.head.args) if isinstance(a, Interval)]
        if not positions:
            statements.append(rule)
            continue
        changed = True
        heads = [()]
        for arg in rule.head.args:
            if isinstance(arg, Interval):
                heads = [h + (Number(v),) for h in heads for v in range(arg.lo, arg.hi + 1)]
            else:
                heads = [h + (arg,) for h in heads]
        statements.extend(replace(rule, head=Atom(rule.head.name, h)) for h in heads)
    if not changed:
        return program
    return replace(program, statements=tuple(statements))


# --------------------------------------------------------------------------
# Interpretations and literal evaluation

class Interpretation:
    """Ground atoms indexed by predicate signature."""

    def __init__(self, atoms: Iterable[Atom] = ()):
        self.relations: dict = defaultdict(set)
        for atom in atoms:
            self.add(atom)

    def add(self, atom: Atom) -> None:
        self.relations[atom.signature].add(atom.args)

    def __contains__(self, atom: Atom) -> bool:
        rel = self.relations.get(atom.signature)
        return rel is not None and atom.args in rel

    def tuples(self, signature) -> set:
        return self.relations.get(signature, ())


def as_interpretation(atoms) -> Interpretation:
    if isinstance(atoms, Interpretation):
        return atoms
    if isinstance(atoms, AnswerSet):
        atoms = atoms.atoms
    return Interpretation(atoms)


def _match(pattern: Atom, args: tuple, binding: dict) -> Optional[dict]:
    extended = None
    for pat, val in zip(pattern.args, args):
        if isinstance(pat, Variable):
            scope = binding if extended is None else extended
            cur = scope.get(pat.name)
            if cur is None:
                if extended is None:
                    extended = dict(binding)
                extended[pat.name] = val
            elif cur != val:
                return None
        elif pat != val:
            return None
    return binding if extended is None else extended


def _count_matches(local_vars, condition: Atom, interp: Interpretation) -> int:
    seen = set()
    for args in interp.tuples(condition.signature):
        b = _match(condition, args, {})
        if b is not None:
            seen.add(tuple(b[v.name] for v in local_vars))
    return len(seen)


def _resolve_bound(bound, binding, consts) -> Optional[int]:
    bound = substitute_term(bound, binding)
    if isinstance(bound, Symbol):
        if consts is not None and bound.name in consts:
            return consts[bound.name]
        raise UnknownConstError(f"aggregate bound {bound.name!r} is not a declared #const")
    if isinstance(bound, Number):
        return bound.value
    return None


def eval_count(bound, local_vars, condition: Atom, outer_binding: Substitution, lower_atoms,
               consts: Optional[Mapping[str, int]] = None) -> bool:
    """True iff exactly ``bound`` distinct tuples of ``local_vars`` satisfy ``condition``.

    Variables of ``condition`` that are not local are taken from ``outer_binding``.
    ``bound`` may be an int or a term (a const name is looked up in ``consts``).
    """
    if isinstance(bound, int):
        bound = Number(bound)
    local_names = {v.name for v in local_vars}
    outer = {k: v for k, v in outer_binding.items() if k not in local_names}
    value = _resolve_bound(bound, outer, consts)
    if value is None:
        return False
    cond = substitute_atom(condition, outer)
    return _count_matches(local_vars, cond, as_interpretation(lower_atoms)) == value


def _compare(left, op, right) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    # Orderings are only defined between integers.
    if not (isinstance(left, Number) and isinstance(right, Number)):
        return False
    a, b = left.value, right.value
    return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]


def literal_holds(lit, atoms, binding: Optional[Substitution] = None,
                  consts: Optional[Mapping[str, int]] = None) -> bool:
    """Evaluate a body literal under ``binding`` against a set of ground atoms."""
    binding = binding or {}
    interp = as_interpretation(atoms)
    if isinstance(lit, Positive):
        return substitute_atom(lit.atom, binding) in interp
    if isinstance(lit, Negated):
        return substitute_atom(lit.atom, binding) not in interp
    if isinstance(lit, Comparison):
        left = substitute_term(lit.left, binding)
        right = substitute_term(lit.right, binding)
        if consts:
            left = Number(consts[left.name]) if isinstance(left, Symbol) and left.name in consts else left
            right = Number(consts[right.name]) if isinstance(right, Symbol) and right.name in consts else right
        return _compare(left, lit.op, right)
    return eval_count(lit.bound, lit.local_vars, lit.condition, binding, interp, consts)


# --------------------------------------------------------------------------
# Answer sets

class AtomMeta(NamedTuple):
    stratum: int
    round: int
    is_fact: bool

    @property
    def order(self) -> tuple[int, int]:
        return (self.stratum, self.round)


@dataclass(frozen=True)
class AnswerSet:
    atoms: frozenset
    meta: dict = field(default_factory=dict)
    # atom -> tuple of (rule, binding items) instances that first derived it
    supports: dict = field(default_factory=dict, compare=False)

    def __contains__(self, atom) -> bool:
        return atom in self.atoms

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.atoms)

    def sorted(self) -> list[Atom]:
        return sorted(self.atoms, key=atom_key)

    def restrict(self, keep) -> "AnswerSet":
        """Sub-answer-set of the atoms for which ``keep(atom)`` is true."""
        atoms = frozenset(a for a in self.atoms if keep(a))
        return AnswerSet(
            atoms,
            {a: m for a, m in self.meta.items() if a in atoms},
            {a: s for a, s in self.supports.items() if a in atoms},
        )


def _join(body: list, sources: list, interp: Interpretation, binding: dict, i: int = 0):
    if i == len(body):
        yield binding
        return
    atom = body[i]
    rel = sources[i] if sources[i] is not None else interp.tuples(atom.signature)
    for args in rel:
        if len(args) != len(atom.args):
            continue
        b = _match(atom, args, binding)
        if b is not None:
            yield from _join(body, sources, interp, b, i + 1)


def _instances(rule: Rule, interp: Interpretation, delta: Optional[dict]):
    body = rule.positive_body
    if delta is None:
        yield from _join(body, [None] * len(body), interp, {})
        return
    # At least one positive atom must come from the previous round.
    for i, atom in enumerate(body):
        new = delta.get(atom.signature)
        if new:
            sources = [None] * len(body)
            sources[i] = new
            yield from _join(body, sources, interp, {})


def evaluate(program: Program, semi_naive: bool = True) -> AnswerSet:
    """Compute the unique answer set of a safe, stratified program.

    ``#const`` names are resolved and interval facts expanded first. The
    returned meta records, for each atom, the stratum of its predicate and the
    round of its first derivation (facts are round 0).
    """
    consts = dict(program.consts)
    program = expand_intervals(resolve_consts(program))
    violations = safety_check(program)
    if violations:
        raise UnsafeProgramError(violations)
    strat = stratify(program)

    interp = Interpretation()
    meta: dict = {}
    supports: dict = {}
    by_stratum = defaultdict(list)
    for rule in program.statements:
        stratum = strat[rule.head.signature]
        if rule.is_fact:
            if rule.head not in interp:
                interp.add(rule.head)
                meta[rule.head] = AtomMeta(stratum, 0, True)
        else:
            by_stratum[stratum].append(rule)

    for stratum in strat.order:
        rules = by_stratum.get(stratum, [])
        delta = None
        rnd = 0
        while rules:
            rnd += 1
            derived = defaultdict(set)
            for rule in rules:
                seen = set()
                for binding in _instances(rule, interp, delta if semi_naive else None):
                    key = tuple(sorted(binding.items()))
                    if key in seen:
                        continue
                    seen.add(key)
                    if not all(literal_holds(t, interp, binding, consts) for t in rule.test_body):
                        continue
                    head = substitute_atom(rule.head, binding)
                    if head not in interp:
                        derived[head].add((rule, key))
            if not derived:
                break
            delta = defaultdict(set)
            for atom, instances in derived.items():
                interp.add(atom)
                delta[atom.signature].add(atom.args)
                meta[atom] = AtomMeta(stratum, rnd, False)
                supports[atom] = tuple(sorted(instances, key=_instance_key))
            logger.debug("stratum %d round %d: %d new atoms", stratum, rnd, len(derived))

    atoms = frozenset(meta)
    return AnswerSet(atoms, meta, supports)


def _instance_key(instance):
    rule, items = instance
    return (rule.source_index, str(rule), [(k, term_key(v)) for k, v in items])


def filter_shown(answer_set: AnswerSet, program: Program) -> frozenset:
    """Atoms selected by the ``#show`` directives (all atoms when there are none)."""
    if not program.shows:
        return answer_set.atoms
    shown = set(program.shows)
    return frozenset(a for a in answer_set.atoms if a.signature in shown)
