from __future__ import annotations

from typing import Optional


class MatroidlabError(Exception):
    """Base class for every error raised by matroidlab."""

    exit_code = 2


class MatroidError(MatroidlabError, ValueError):
    """Invalid matroid, labeling or instance data."""


class PreconditionError(MatroidlabError, ValueError):
    """An operation was called outside its documented preconditions."""


class FormatError(MatroidlabError, ValueError):
    """Malformed input file; carries the offending path and 1-based line."""

    def __init__(self, message: str, *, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}:"
        super().__init__(f"{where} {message}" if where else message)


class GroupOverflowError(MatroidlabError, ArithmeticError):
    """Exact integer label arithmetic left the representable range."""


class SearchLimitExceeded(MatroidlabError, RuntimeError):
    """A search cap or size guard was hit before an answer was found."""

    exit_code = 3


class SolverError(MatroidlabError, RuntimeError):
    """No usable SAT solver command was configured."""


# CLI exit codes
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3
