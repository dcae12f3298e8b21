"""Exception hierarchy.

Each family maps to one CLI exit code (see :mod:`signlink.cli`).
"""


class SignlinkError(Exception):
    pass


class GraphValidationError(SignlinkError, ValueError):
    """Malformed graph input."""


class SelfLoopError(GraphValidationError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class InvalidSignError(GraphValidationError):
    pass


class NodeIndexError(GraphValidationError, IndexError):
    pass


class DisconnectedGraphError(GraphValidationError):
    pass


class ComponentMismatchError(SignlinkError, ValueError):
    """Two nodes queried together live in different tree components."""


class SizeLimitError(SignlinkError, ValueError):
    """Exact enumeration requested beyond the configured size limit."""


class ParameterError(SignlinkError, ValueError):
    pass


class ConvergenceError(SignlinkError, RuntimeError):
    """Iterative solver ran out of iterations; carries the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class MissingLabelError(SignlinkError, KeyError):
    pass


class EdgeListParseError(SignlinkError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PackingError(SignlinkError, RuntimeError):
    """Greedy triangle packing gave up after its retry budget."""
