"""Explanations for stratified answer set programs via rule instrumentation."""

from .engine import AnswerSet, evaluate, filter_shown, stratify
from .explain import (
    Explanation,
    JustificationTree,
    build_explanations,
    build_justification_tree,
    explain_program,
    select_explanations,
)
from .instrument import InstrumentedProgram, instrument_program
from .syntax import Program, parse_program

__all__ = [
    "AnswerSet",
    "Explanation",
    "InstrumentedProgram",
    "JustificationTree",
    "Program",
    "build_explanations",
    "build_justification_tree",
    "evaluate",
    "explain_program",
    "filter_shown",
    "instrument_program",
    "parse_program",
    "select_explanations",
    "stratify",
]
__version__ = "0.1.0"
