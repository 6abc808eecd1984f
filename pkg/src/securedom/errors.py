"""Exception hierarchy shared by every module."""


class SecureDomError(Exception):
    """Base class for all package errors."""


class GraphInputError(SecureDomError, ValueError):
    """Malformed graph, vertex, set or witness supplied by the caller."""


class SizeLimitError(SecureDomError):
    """An exact search was asked to run above its hard vertex cap."""


class PreconditionError(SecureDomError):
    """An operation's documented precondition does not hold."""


class ClassError(PreconditionError):
    """Input graph is not a member of the class the operation requires."""


class DisconnectedError(ClassError):
    """Connected input required."""


class ClaimViolation(SecureDomError):
    """A reduction's lifting argument failed on a concrete instance."""

    def __init__(self, case: str, message: str):
        super().__init__(f"[{case}] {message}")
        self.case = case


class DependencyError(SecureDomError):
    """A plugged-in procedure returned an output that does not verify."""
