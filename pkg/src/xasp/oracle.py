"""Cross-check our answer sets against an external solver process.

The solver is run as ``SOLVER FILE`` and must print a single model as one
line of whitespace-separated ground atoms (respecting ``#show``). Anything
else on standard output is rejected rather than guessed at.
"""

from __future__ import annotations

import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .engine import evaluate, filter_shown
from .errors import ParseError, SolverOutputParseError, SolverSpawnError
from .instrument import DEFAULT_RECORDING_PREDICATE, instrument_program
from .render import program_to_source
from .syntax import Program, parse_ground_atom

SOLVER_ENV = "XASP_SOLVER"
DEFAULT_TIMEOUT = 30.0


@dataclass(frozen=True)
class OracleReport:
    missing_in_ours: frozenset = field(default_factory=frozenset)
    extra_in_ours: frozenset = field(default_factory=frozenset)

    @property
    def match(self) -> bool:
        return not self.missing_in_ours and not self.extra_in_ours


def parse_model(output: str) -> frozenset:
    lines = [line for line in output.splitlines() if line.strip()]
    if len(lines) > 1:
        raise SolverOutputParseError(f"expected one model line, got {len(lines)} lines")
    atoms = set()
    for token in (lines[0].split() if lines else []):
        try:
            atoms.add(parse_ground_atom(token))
        except ParseError as exc:
            raise SolverOutputParseError(f"cannot parse {token!r} as a ground atom: {exc}") from None
    return frozenset(atoms)


def run_solver(solver: str, path: str, timeout: float = DEFAULT_TIMEOUT) -> frozenset:
    try:
        proc = subprocess.run([solver, str(path)], capture_output=True, text=True, timeout=timeout)
    except (OSError, ValueError) as exc:
        raise SolverSpawnError(f"cannot run solver {solver!r}: {exc}") from None
    except subprocess.TimeoutExpired:
        raise SolverSpawnError(f"solver {solver!r} timed out after {timeout}s") from None
    return parse_model(proc.stdout)


def default_solver():
    return os.environ.get(SOLVER_ENV)


def compare(program: Program, solver: str, instrumented: bool = False,
            predicate: str = DEFAULT_RECORDING_PREDICATE, number_facts: bool = False,
            timeout: float = DEFAULT_TIMEOUT) -> OracleReport:
    """Evaluate ``program`` natively and with ``solver``; report the differences."""
    if instrumented:
        program = instrument_program(program, predicate, number_facts).extended
    ours = filter_shown(evaluate(program), program)
    with tempfile.TemporaryDirectory(prefix="xasp-") as tmp:
        path = Path(tmp) / "program.lp"
        path.write_text(program_to_source(program), encoding="utf-8")
        theirs = run_solver(solver, path, timeout)
    return OracleReport(missing_in_ours=frozenset(theirs - ours), extra_in_ours=frozenset(ours - theirs))
