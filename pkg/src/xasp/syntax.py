"""Lexer, parser, AST and safety checking for the supported ASP subset.

The accepted language is the smallest fragment needed by the bundled link
analysis programs: facts (optionally with an integer interval), normal rules
whose bodies mix positive atoms, default negation, comparisons and
``bound = #count{Vars : atom}`` aggregates, plus ``#const`` and ``#show``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple, Optional, Union

from .errors import IllegalCharacterError, ParseError


# --------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Symbol:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Number:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __str__(self):
        return f"{self.lo}..{self.hi}"


Term = Union[Variable, Symbol, Number, Interval]


def term_key(term: Term):
    """Total order on terms: numbers first (numerically), then symbols, then variables."""
    if isinstance(term, Number):
        return (0, term.value, "")
    if isinstance(term, Symbol):
        return (1, 0, term.name)
    if isinstance(term, Variable):
        return (2, 0, term.name)
    return (3, term.lo, str(term.hi))


# --------------------------------------------------------------------------
# Atoms and literals

@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple = ()

    @property
    def signature(self) -> tuple[str, int]:
        return (self.name, len(self.args))

    @property
    def is_ground(self) -> bool:
        return all(isinstance(a, (Symbol, Number)) for a in self.args)

    def format(self, sep: str = ",") -> str:
        if not self.args:
            return self.name
        return f"{self.name}({sep.join(str(a) for a in self.args)})"

    def __str__(self):
        return self.format()


def atom_key(atom: Atom):
    return (atom.name, len(atom.args), tuple(term_key(a) for a in atom.args))


@dataclass(frozen=True)
class Positive:
    atom: Atom

    def format(self, sep=","):
        return self.atom.format(sep)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Negated:
    atom: Atom

    def format(self, sep=","):
        return f"not {self.atom.format(sep)}"

    def __str__(self):
        return self.format()


COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str
    right: Term

    def format(self, sep=","):
        return f"{self.left}{self.op}{self.right}"

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class CountEquality:
    """``bound = #count{local_vars : condition}``."""

    bound: Term
    local_vars: tuple
    condition: Atom

    def format(self, sep=","):
        names = sep.join(v.name for v in self.local_vars)
        return f"{self.bound}=#count{{{names}:{self.condition.format(sep)}}}"

    def __str__(self):
        return self.format()


Literal = Union[Positive, Negated, Comparison, CountEquality]


def is_test_literal(lit: Literal) -> bool:
    return not isinstance(lit, Positive)


# --------------------------------------------------------------------------
# Rules and programs

@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple = ()
    # Positional metadata is excluded from equality so that a program survives
    # a print/parse round trip unchanged.
    source_index: int = field(default=0, compare=False)
    rule_id: Optional[int] = field(default=None, compare=False)

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def positive_body(self) -> list[Atom]:
        return [lit.atom for lit in self.body if isinstance(lit, Positive)]

    @property
    def test_body(self) -> list[Literal]:
        return [lit for lit in self.body if is_test_literal(lit)]

    def format(self, sep: str = ", ") -> str:
        head = self.head.format(sep)
        if not self.body:
            return f"{head}."
        return f"{head} :- {sep.join(lit.format(sep) for lit in self.body)}."

    def __str__(self):
        return self.format(",")


@dataclass(frozen=True)
class Program:
    consts: dict = field(default_factory=dict)
    statements: tuple = ()
    shows: tuple = ()

    @property
    def rules(self) -> list[Rule]:
        return [r for r in self.statements if not r.is_fact]

    @property
    def facts(self) -> list[Rule]:
        return [r for r in self.statements if r.is_fact]

    def predicates(self) -> set[tuple[str, int]]:
        """Signatures of every predicate mentioned in a statement."""
        found = set()
        for rule in self.statements:
            found.add(rule.head.signature)
            for lit in rule.body:
                if isinstance(lit, (Positive, Negated)):
                    found.add(lit.atom.signature)
                elif isinstance(lit, CountEquality):
                    found.add(lit.condition.signature)
        return found


# --------------------------------------------------------------------------
# Variables

def term_vars(term: Term) -> list[Variable]:
    return [term] if isinstance(term, Variable) else []


def atom_vars(atom: Atom) -> list[Variable]:
    return [a for a in atom.args if isinstance(a, Variable)]


def literal_vars(lit: Literal, include_local: bool = True) -> list[Variable]:
    """Variables of a literal in occurrence order (with repeats)."""
    if isinstance(lit, (Positive, Negated)):
        return atom_vars(lit.atom)
    if isinstance(lit, Comparison):
        return term_vars(lit.left) + term_vars(lit.right)
    out = term_vars(lit.bound)
    cond = atom_vars(lit.condition)
    if include_local:
        return out + cond
    return out + [v for v in cond if v not in lit.local_vars]


# --------------------------------------------------------------------------
# Lexer

class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


DIRECTIVES = ("#const", "#count", "#show")

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r\n]+)
    | (?P<comment>%[^\n]*)
    | (?P<directive>\#[a-z]+)
    | (?P<punct>:-|\.\.|!=|<=|>=|[.,(){}:/<>=])
    | (?P<int>-?[0-9]+)
    | (?P<ident>[a-z][A-Za-z0-9_']*)
    | (?P<var>[A-Z][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split program text into tokens; comments and whitespace are dropped.

    Token kinds are ``ident``, ``var``, ``int``, ``not``, the directive text
    (``#const``, ``#count``, ``#show``) or the punctuation text itself.
    """
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if m is None:
            raise IllegalCharacterError(f"illegal character {text[pos]!r}", line, column)
        kind = m.lastgroup
        value = m.group()
        if kind == "directive":
            if value not in DIRECTIVES:
                raise IllegalCharacterError(f"unknown directive {value!r}", line, column)
            tokens.append(Token(value, value, line, column))
        elif kind == "punct":
            tokens.append(Token(value, value, line, column))
        elif kind == "ident":
            tokens.append(Token("not" if value == "not" else "ident", value, line, column))
        elif kind in ("int", "var"):
            tokens.append(Token(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


# --------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self._eof_line, self._eof_col = _end_position(text)

    def peek(self, offset: int = 0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, *kinds: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def error(self, expected) -> ParseError:
        tok = self.peek()
        if tok is None:
            return ParseError("unexpected end of input", self._eof_line, self._eof_col, expected)
        return ParseError(f"unexpected {tok.text!r}", tok.line, tok.column, expected)

    def expect(self, *kinds: str) -> Token:
        if not self.at(*kinds):
            raise self.error(kinds)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    # statements ---------------------------------------------------------

    def program(self) -> Program:
        consts: dict[str, int] = {}
        statements = []
        shows = []
        index = 0
        while self.peek() is not None:
            if self.at("#const"):
                tok = self.expect("#const")
                name = self.expect("ident").text
                self.expect("=")
                value = int(self.expect("int").text)
                self.expect(".")
                if name in consts:
                    raise ParseError(f"duplicate #const {name}", tok.line, tok.column)
                consts[name] = value
            elif self.at("#show"):
                self.expect("#show")
                name = self.expect("ident").text
                self.expect("/")
                arity = int(self.expect("int").text)
                self.expect(".")
                if arity < 0:
                    raise ParseError("negative arity in #show")
                if (name, arity) not in shows:
                    shows.append((name, arity))
            else:
                statements.append(self.rule(index))
            index += 1
        return Program(consts=consts, statements=tuple(statements), shows=tuple(shows))

    def rule(self, index: int) -> Rule:
        start = self.peek()
        head = self.atom(allow_interval=True)
        body = []
        if self.at(":-"):
            self.expect(":-")
            body.append(self.literal())
            while self.at(","):
                self.expect(",")
                body.append(self.literal())
        self.expect(".")
        if body and any(isinstance(a, Interval) for a in head.args):
            raise ParseError("intervals are only allowed in facts", start.line, start.column)
        return Rule(head=head, body=tuple(body), source_index=index)

    # literals -----------------------------------------------------------

    def literal(self) -> Literal:
        if self.at("not"):
            self.expect("not")
            return Negated(self.atom())
        if self.at("ident"):
            nxt = self.peek(1)
            if nxt is None or nxt.kind not in COMPARISON_OPS:
                return Positive(self.atom())
        if not self.at("ident", "var", "int"):
            raise self.error(("ident", "var", "int", "not"))
        left = self.term()
        op = self.expect(*COMPARISON_OPS).text
        if self.at("#count"):
            if op != "=":
                raise self.error(("ident", "var", "int"))
            return self.count(left)
        return Comparison(left, op, self.term())

    def count(self, bound: Term) -> CountEquality:
        tok = self.expect("#count")
        self.expect("{")
        local = [Variable(self.expect("var").text)]
        while self.at(","):
            self.expect(",")
            local.append(Variable(self.expect("var").text))
        self.expect(":")
        condition = self.atom()
        self.expect("}")
        if isinstance(bound, Variable) and bound in local:
            raise ParseError("aggregate bound must not be a local variable", tok.line, tok.column)
        return CountEquality(bound, tuple(dict.fromkeys(local)), condition)

    def atom(self, allow_interval: bool = False) -> Atom:
        name = self.expect("ident").text
        args = []
        if self.at("("):
            self.expect("(")
            args.append(self.term(allow_interval))
            while self.at(","):
                self.expect(",")
                args.append(self.term(allow_interval))
            self.expect(")")
        return Atom(name, tuple(args))

    def term(self, allow_interval: bool = False) -> Term:
        tok = self.expect("ident", "var", "int")
        if tok.kind == "ident":
            return Symbol(tok.text)
        if tok.kind == "var":
            return Variable(tok.text)
        lo = int(tok.text)
        if allow_interval and self.at(".."):
            self.expect("..")
            hi_tok = self.expect("int")
            hi = int(hi_tok.text)
            if hi < lo:
                raise ParseError(f"empty interval {lo}..{hi}", hi_tok.line, hi_tok.column)
            return Interval(lo, hi)
        return Number(lo)


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def parse_program(text: str) -> Program:
    """Parse program text into a :class:`Program` (statements in source order)."""
    return _Parser(text).program()


def parse_atom(text: str) -> Atom:
    """Parse a single atom such as ``cn_lp(1,3)``; variables are permitted."""
    parser = _Parser(text)
    atom = parser.atom()
    if parser.peek() is not None:
        raise parser.error(("<end>",))
    return atom


def parse_ground_atom(text: str) -> Atom:
    atom = parse_atom(text)
    if not atom.is_ground:
        raise ParseError(f"atom {text!r} is not ground")
    return atom


# --------------------------------------------------------------------------
# Constants

def resolve_consts(program: Program) -> Program:
    """Replace ``#const`` names used as comparison operands or count bounds."""
    if not program.consts:
        return program

    def sub(term):
        if isinstance(term, Symbol) and term.name in program.consts:
            return Number(program.consts[term.name])
        return term

    statements = []
    for rule in program.statements:
        body = []
        for lit in rule.body:
            if isinstance(lit, Comparison):
                lit = Comparison(sub(lit.left), lit.op, sub(lit.right))
            elif isinstance(lit, CountEquality):
                lit = replace(lit, bound=sub(lit.bound))
            body.append(lit)
        statements.append(replace(rule, body=tuple(body)))
    return replace(program, statements=tuple(statements))


# --------------------------------------------------------------------------
# Safety

@dataclass(frozen=True)
class Violation:
    rule: Rule
    variable: Variable
    reason: str

    def __str__(self):
        return f"statement {self.rule.source_index} `{self.rule}`: variable {self.variable} {self.reason}"


def rule_violations(rule: Rule) -> Iterator[Violation]:
    bound = set()
    for atom in rule.positive_body:
        bound.update(atom_vars(atom))

    reported = set()

    def unsafe(var, reason):
        if var not in reported:
            reported.add(var)
            yield Violation(rule, var, reason)

    for var in atom_vars(rule.head):
        if var not in bound:
            yield from unsafe(var, "occurs in the head but in no positive body atom")
    for i, lit in enumerate(rule.body):
        if isinstance(lit, Negated):
            for var in atom_vars(lit.atom):
                if var not in bound:
                    yield from unsafe(var, "occurs under negation but in no positive body atom")
        elif isinstance(lit, Comparison):
            for var in literal_vars(lit):
                if var not in bound:
                    yield from unsafe(var, "occurs in a comparison but in no positive body atom")
        elif isinstance(lit, CountEquality):
            cond_vars = set(atom_vars(lit.condition))
            elsewhere = set(atom_vars(rule.head))
            for j, other in enumerate(rule.body):
                if j != i:
                    elsewhere.update(literal_vars(other, include_local=False))
            for var in lit.local_vars:
                if var not in cond_vars:
                    yield from unsafe(var, "is an aggregate variable missing from its condition")
                if var in elsewhere:
                    yield from unsafe(var, "is an aggregate variable that also occurs outside the aggregate")
            for var in literal_vars(lit, include_local=False):
                if var not in bound:
                    yield from unsafe(var, "occurs in an aggregate but in no positive body atom")


def safety_check(program: Program) -> list[Violation]:
    """Return every range-restriction violation; an empty list means the program is safe."""
    violations = []
    for rule in program.statements:
        violations.extend(rule_violations(rule))
    return violations


# --------------------------------------------------------------------------
# Substitution

def substitute_term(term: Term, binding) -> Term:
    if isinstance(term, Variable):
        return binding.get(term.name, term)
    return term


def substitute_atom(atom: Atom, binding) -> Atom:
    if not atom.args:
        return atom
    return Atom(atom.name, tuple(substitute_term(a, binding) for a in atom.args))


def substitute_literal(lit: Literal, binding) -> Literal:
    """Apply ``binding`` to a literal; aggregate-local variables stay unbound."""
    if isinstance(lit, Positive):
        return Positive(substitute_atom(lit.atom, binding))
    if isinstance(lit, Negated):
        return Negated(substitute_atom(lit.atom, binding))
    if isinstance(lit, Comparison):
        return Comparison(substitute_term(lit.left, binding), lit.op, substitute_term(lit.right, binding))
    local = {v.name for v in lit.local_vars}
    outer = {k: v for k, v in binding.items() if k not in local}
    return CountEquality(substitute_term(lit.bound, outer), lit.local_vars,
                         substitute_atom(lit.condition, outer))
