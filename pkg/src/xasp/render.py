"""Text, JSON and Graphviz DOT serializers."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .engine import AnswerSet
from .explain import FACT, Explanation, JustificationTree
from .syntax import Atom, Program, atom_key

FORMATS = ("text", "json", "dot")


@dataclass(frozen=True)
class RenderOptions:
    format: str = "text"
    show_test_leaves: bool = True
    max_width: Optional[int] = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {FORMATS}")


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


# --------------------------------------------------------------------------
# Programs and answer sets

def program_to_source(program: Program) -> str:
    """Canonical source text: consts, then statements, then show directives."""
    lines = [f"#const {name}={value}." for name, value in program.consts.items()]
    lines += [rule.format(", ") for rule in program.statements]
    lines += [f"#show {name}/{arity}." for name, arity in program.shows]
    return "".join(line + "\n" for line in lines)


def atoms_to_text(atoms: Iterable[Atom]) -> str:
    """Atoms on one line, sorted by predicate then arguments (clingo model style)."""
    return " ".join(str(a) for a in sorted(atoms, key=atom_key))


def _atom_obj(atom: Atom) -> dict:
    return {"pred": atom.name, "args": [str(a) for a in atom.args]}


def answer_set_to_obj(answer_set: AnswerSet, atoms: Optional[Iterable[Atom]] = None) -> dict:
    chosen = sorted(answer_set.atoms if atoms is None else atoms, key=atom_key)
    meta = {}
    for atom in chosen:
        m = answer_set.meta.get(atom)
        if m is not None:
            meta[str(atom)] = {"stratum": m.stratum, "round": m.round, "fact": m.is_fact}
    return {"atoms": [_atom_obj(a) for a in chosen], "meta": meta}


# --------------------------------------------------------------------------
# Explanations

def _explanation_parts(explanation: Explanation) -> list[str]:
    head = str(explanation.head)
    pos = ",".join(str(a) for a in explanation.positive_body)
    test = ",".join(str(t) for t in explanation.test_body)
    return [f"{head}-is_supported_by-", f"([{head}]-", f"[{pos}]-", f"[{test}])"]


def explanation_to_text(explanation: Explanation, width: Optional[int] = None, indent: str = "   ") -> str:
    """``HEAD-is_supported_by-([HEAD]-[POS,...]-[TEST,...])``; empty for facts.

    With ``width`` the line is broken between its bracketed parts.
    """
    if not explanation.positive_body and not explanation.test_body:
        return ""
    parts = _explanation_parts(explanation)
    if not width:
        return "".join(parts)
    lines, current = [], ""
    for part in parts:
        if current.strip() and len(current) + len(part) > width:
            lines.append(current)
            current = indent
        current += part
    lines.append(current)
    return "\n".join(lines)


def explanations_to_text(explanations: Iterable[Explanation], width: Optional[int] = None) -> str:
    lines = [explanation_to_text(e, width) for e in explanations]
    return "\n".join(line for line in lines if line)


def explanation_to_obj(explanation: Explanation) -> dict:
    return {
        "head": str(explanation.head),
        "rule": explanation.rule_id,
        "theta": {k: str(v) for k, v in explanation.theta.items()},
        "pos": [str(a) for a in explanation.positive_body],
        "test": [str(t) for t in explanation.test_body],
    }


def explanations_to_dot(explanations: Iterable[Explanation], show_test_leaves: bool = True) -> str:
    """Dependency graph of explanations: one node per atom or tested literal."""
    ids: dict = {}
    nodes, edges = [], []

    def node(label, shape):
        key = (label, shape)
        if key not in ids:
            ids[key] = f"n{len(ids)}"
            nodes.append(f'  {ids[key]} [label={_quote(label)}, shape={shape}];')
        return ids[key]

    for e in explanations:
        head = node(str(e.head), "ellipse")
        for atom in e.positive_body:
            edges.append(f'  {head} -> {node(str(atom), "ellipse")} [label="{e.rule_id}"];')
        if show_test_leaves:
            for test in e.test_body:
                edges.append(f'  {head} -> {node(str(test), "box")} [style=dashed, label="{e.rule_id}"];')
    return _digraph("explanations", nodes, edges)


# --------------------------------------------------------------------------
# Trees

def tree_to_obj(tree: JustificationTree, show_test_leaves: bool = True) -> dict:
    if tree.is_fact:
        support = FACT
    else:
        support = {"rule": tree.support.rule_id, "theta": {k: str(v) for k, v in tree.support.theta.items()}}
    return {
        "atom": str(tree.root),
        "support": support,
        "children": [tree_to_obj(c, show_test_leaves) for c in tree.children],
        "tests": [str(t) for t in tree.test_leaves] if show_test_leaves else [],
    }


def tree_to_text(tree: JustificationTree, show_test_leaves: bool = True, indent: str = "  ") -> str:
    lines = []

    def walk(t, level):
        pad = indent * level
        tag = "fact" if t.is_fact else f"rule {t.support.rule_id}"
        lines.append(f"{pad}{t.root}  [{tag}]")
        for child in t.children:
            walk(child, level + 1)
        if show_test_leaves:
            for test in t.test_leaves:
                lines.append(f"{pad}{indent}{test}  [tested]")

    walk(tree, 0)
    return "\n".join(lines)


def tree_to_dot(tree: JustificationTree, show_test_leaves: bool = True) -> str:
    """Preorder-numbered DOT tree; solid edges to subtrees, dashed edges to tested literals."""
    nodes, edges = [], []
    counter = [0]

    def fresh():
        name = f"n{counter[0]}"
        counter[0] += 1
        return name

    def walk(t):
        me = fresh()
        shape = "box, style=rounded" if t.is_fact else "ellipse"
        nodes.append(f"  {me} [label={_quote(str(t.root))}, shape={shape}];")
        for child in t.children:
            edges.append(f"  {me} -> {walk(child)};")
        if show_test_leaves:
            for test in t.test_leaves:
                leaf = fresh()
                nodes.append(f"  {leaf} [label={_quote(str(test))}, shape=box];")
                edges.append(f"  {me} -> {leaf} [style=dashed];")
        return me

    walk(tree)
    return _digraph("justification", nodes, edges)


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _digraph(name, nodes, edges) -> str:
    return "\n".join([f"digraph {name} {{", *nodes, *edges, "}"]) + "\n"


# --------------------------------------------------------------------------

def to_json(value, show_test_leaves: bool = True) -> str:
    """Serialize an answer set, an explanation (or list of them) or a tree."""
    if isinstance(value, AnswerSet):
        return dumps(answer_set_to_obj(value))
    if isinstance(value, Explanation):
        return dumps(explanation_to_obj(value))
    if isinstance(value, JustificationTree):
        return dumps(tree_to_obj(value, show_test_leaves))
    return dumps([explanation_to_obj(e) for e in value])
