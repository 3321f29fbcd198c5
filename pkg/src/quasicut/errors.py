"""Exception types raised across the package."""


class QuasicutError(Exception):
    """Base class for all errors raised by quasicut."""


class InputError(QuasicutError):
    """The caller supplied something malformed. Maps to CLI exit code 1."""


class InvalidGraph(InputError):
    pass


class NotADag(InputError):
    pass


class NotATree(InputError):
    pass


class ZOutOfRange(InputError):
    pass


class InvalidDecomposition(InputError):
    pass


class SeparatorFailure(QuasicutError):
    """No balanced separator of the requested size exists."""


class DegenerateSpace(InputError):
    """All distances are 0 or infinite, so there is no scale ladder."""


class ScaleMismatch(InputError):
    pass


class NotAQuasiUltrametric(InputError):
    pass


class TooLarge(InputError):
    pass


class Infeasible(QuasicutError):
    pass


class Unbounded(QuasicutError):
    pass


class CycleSuspected(QuasicutError):
    pass


class NoSeparatingCandidate(QuasicutError):
    pass


class NonProgress(QuasicutError):
    pass


class ParseError(InputError):
    """Text input could not be parsed; ``line`` is 1-based."""

    def __init__(self, kind, line, message=""):
        self.kind = kind
        self.line = line
        super().__init__(f"{kind} at line {line}" + (f": {message}" if message else ""))
