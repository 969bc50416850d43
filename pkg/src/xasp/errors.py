"""Exception hierarchy shared by all xasp modules."""


class XaspError(Exception):
    """Base class for every error raised by xasp."""


class ParseError(XaspError):
    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        where = f"{line}:{column}: " if line is not None else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{tail}")


class IllegalCharacterError(ParseError):
    pass


class UnsafeProgramError(XaspError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnstratifiableError(XaspError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        path = " -> ".join(f"{name}/{arity}" for name, arity in self.cycle)
        super().__init__(f"recursion through a test literal: {path}")


class UnknownConstError(XaspError):
    pass


class ReservedPredicateError(XaspError):
    pass


class ArityMismatchError(XaspError):
    pass


class NotInAnswerSetError(XaspError):
    pass


class DepthExceededError(XaspError):
    pass


class SolverSpawnError(XaspError):
    pass


class SolverOutputParseError(XaspError):
    pass
