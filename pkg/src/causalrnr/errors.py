"""Exception types shared across the package."""

from __future__ import annotations


class CausalRnrError(Exception):
    """Base class for package-specific errors."""


class CyclicInput(CausalRnrError):
    """A relation that must be acyclic contains a cycle."""


class UniverseMismatch(CausalRnrError):
    """A view's operation set differs from its required universe."""


class NotStronglyCausal(CausalRnrError):
    """Record construction requires a strongly causal view set."""


class MalformedStream(CausalRnrError):
    """An observation stream violates the stream contract."""


class BudgetExceeded(CausalRnrError):
    """An exhaustive search exceeded its configured budget."""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


class PreconditionViolated(CausalRnrError):
    """A constructive procedure was invoked outside its precondition."""


class InternalInvariant(CausalRnrError):
    """A property the theory guarantees did not hold; indicates a bug."""


class ParseError(CausalRnrError):
    """Input text does not conform to the file grammar."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SemanticError(CausalRnrError):
    """Input parsed but is semantically inconsistent."""
