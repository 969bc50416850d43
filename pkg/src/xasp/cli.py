"""Command-line interface.

Payload goes to standard output, diagnostics to standard error. Exit codes
are listed in ``EXIT_CODES``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import corpus
from .engine import evaluate, filter_shown
from .errors import (
    ArityMismatchError,
    DepthExceededError,
    NotInAnswerSetError,
    ParseError,
    ReservedPredicateError,
    SolverOutputParseError,
    SolverSpawnError,
    UnknownConstError,
    UnsafeProgramError,
    UnstratifiableError,
    XaspError,
)
from .explain import build_justification_tree, explain_program, select_explanations
from .instrument import DEFAULT_RECORDING_PREDICATE, instrument_program
from .oracle import DEFAULT_TIMEOUT, compare, default_solver
from .render import (
    answer_set_to_obj,
    atoms_to_text,
    explanations_to_dot,
    explanations_to_text,
    program_to_source,
    to_json,
    tree_to_dot,
    tree_to_text,
    dumps,
)
from .syntax import parse_atom, parse_program

log = logging.getLogger("xasp")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SYNTAX = 4
EXIT_UNSAFE = 5
EXIT_UNSTRATIFIABLE = 6
EXIT_UNKNOWN_CONST = 7
EXIT_RESERVED = 8
EXIT_NOT_IN_ANSWER_SET = 9
EXIT_DEPTH = 10
EXIT_SOLVER_SPAWN = 11
EXIT_SOLVER_OUTPUT = 12
EXIT_MISMATCH = 13

# Most specific first.
EXIT_CODES = [
    (OSError, EXIT_IO),
    (ParseError, EXIT_SYNTAX),
    (UnsafeProgramError, EXIT_UNSAFE),
    (UnstratifiableError, EXIT_UNSTRATIFIABLE),
    (UnknownConstError, EXIT_UNKNOWN_CONST),
    (ReservedPredicateError, EXIT_RESERVED),
    (NotInAnswerSetError, EXIT_NOT_IN_ANSWER_SET),
    (DepthExceededError, EXIT_DEPTH),
    (SolverSpawnError, EXIT_SOLVER_SPAWN),
    (SolverOutputParseError, EXIT_SOLVER_OUTPUT),
    (ArityMismatchError, EXIT_ERROR),
    (XaspError, EXIT_ERROR),
]

CORPUS_PREFIX = "corpus:"


def read_input(path: str) -> str:
    if path.startswith(CORPUS_PREFIX):
        return corpus.read(path[len(CORPUS_PREFIX):])
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def parse_signatures(text: str) -> set:
    sigs = set()
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, arity = item.rpartition("/")
        if not sep or not name or not arity.isdigit():
            raise argparse.ArgumentTypeError(f"bad predicate {item!r}; expected name/arity")
        sigs.add((name, int(arity)))
    return sigs


def _emit(text: str) -> None:
    if text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------
# Commands

def run_solve(args) -> int:
    program = parse_program(read_input(args.file))
    answer_set = evaluate(program)
    shown = filter_shown(answer_set, program)
    if args.format == "json":
        _emit(dumps(answer_set_to_obj(answer_set, shown)))
    else:
        _emit(atoms_to_text(shown))
    return EXIT_OK


def run_instrument(args) -> int:
    program = parse_program(read_input(args.file))
    instrumented = instrument_program(program, args.pred, args.number_facts)
    _emit(program_to_source(instrumented.extended))
    return EXIT_OK


def _explain(args):
    program = parse_program(read_input(args.file))
    return explain_program(program, args.pred, args.number_facts)


def run_explain(args) -> int:
    result = _explain(args)
    atom = parse_atom(args.atom) if args.atom else None
    if atom is not None and atom.is_ground and atom not in result.answer_set:
        raise NotInAnswerSetError(f"{atom} is not in the answer set")
    chosen = select_explanations(result.explanations, args.select, atom)
    if args.format == "json":
        _emit(to_json(chosen))
    elif args.format == "dot":
        _emit(explanations_to_dot(chosen, not args.no_tests))
    else:
        _emit(explanations_to_text(chosen, args.width))
    return EXIT_OK


def run_tree(args) -> int:
    result = _explain(args)
    atom = parse_atom(args.atom)
    if not atom.is_ground or atom not in result.answer_set:
        raise NotInAnswerSetError(f"{atom} is not in the answer set")
    tree = build_justification_tree(atom, result.explanations, result.answer_set, args.max_depth)
    show_tests = not args.no_tests
    if args.format == "json":
        _emit(to_json(tree, show_tests))
    elif args.format == "dot":
        _emit(tree_to_dot(tree, show_tests))
    else:
        _emit(tree_to_text(tree, show_tests))
    return EXIT_OK


def run_oracle(args) -> int:
    solver = args.solver or default_solver()
    if not solver:
        raise SolverSpawnError("no solver given (use --solver or set XASP_SOLVER)")
    program = parse_program(read_input(args.file))
    report = compare(program, solver, args.instrumented, args.pred, args.number_facts, args.timeout)
    payload = {
        "match": report.match,
        "missing_in_ours": sorted(str(a) for a in report.missing_in_ours),
        "extra_in_ours": sorted(str(a) for a in report.extra_in_ours),
    }
    if args.format == "json":
        _emit(dumps(payload))
    else:
        lines = [f"match: {'yes' if report.match else 'no'}"]
        lines += [f"missing: {a}" for a in payload["missing_in_ours"]]
        lines += [f"extra: {a}" for a in payload["extra_in_ours"]]
        _emit("\n".join(lines))
    if not report.match:
        print("xasp: model mismatch with external solver", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def run_examples(args) -> int:
    if args.name:
        _emit(corpus.read(args.name))
    else:
        _emit("\n".join(f"{name}\t{corpus.describe(name)}" for name in corpus.names()))
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xasp",
        description="Explain answer sets of stratified ASP programs via rule instrumentation.",
        epilog="FILE may be a path, '-' for stdin, or corpus:NAME for a bundled example.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(p):
        p.add_argument("file", metavar="FILE")

    def with_instrument_opts(p):
        p.add_argument("--pred", default=DEFAULT_RECORDING_PREDICATE,
                       help="name of the recording predicate (default: %(default)s)")
        p.add_argument("--number-facts", action="store_true", help="also number and instrument facts")

    p = sub.add_parser("solve", help="print the shown atoms of the answer set")
    with_file(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=run_solve)

    p = sub.add_parser("instrument", help="print the extended program")
    with_file(p)
    with_instrument_opts(p)
    p.set_defaults(func=run_instrument)

    p = sub.add_parser("explain", help="print explanations of derived atoms")
    with_file(p)
    with_instrument_opts(p)
    p.add_argument("--select", type=parse_signatures, help="comma-separated name/arity list, e.g. p/2,q/1")
    p.add_argument("--atom", help="only explanations of this atom (variables match anything)")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--width", type=int, help="wrap text output at this width")
    p.add_argument("--no-tests", action="store_true", help="omit tested literals from DOT output")
    p.set_defaults(func=run_explain)

    p = sub.add_parser("tree", help="print the justification tree of one atom")
    with_file(p)
    with_instrument_opts(p)
    p.add_argument("--atom", required=True)
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--max-depth", type=int)
    p.add_argument("--no-tests", action="store_true", help="omit tested literals")
    p.set_defaults(func=run_tree)

    p = sub.add_parser("oracle", help="compare with an external solver")
    with_file(p)
    with_instrument_opts(p)
    p.add_argument("--solver", help="solver executable (default: $XASP_SOLVER)")
    p.add_argument("--instrumented", action="store_true", help="compare on the extended program")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=run_oracle)

    p = sub.add_parser("examples", help="list bundled programs or print one")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=run_examples)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except Exception as exc:
        for kind, code in EXIT_CODES:
            if isinstance(exc, kind):
                print(f"xasp: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise


def run() -> None:
    sys.exit(main())
