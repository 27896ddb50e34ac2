"""Exception types shared across the package.

Each maps to one CLI exit code (see ``detrelay.cli``).
"""


class ContractError(ValueError):
    """An argument violates an operation's precondition (shape, length, range)."""


class DomainError(ValueError):
    """A structurally valid argument that lies outside an operation's domain."""


class SizeLimitError(ValueError):
    """The network is too large for exhaustive cut enumeration."""


class NetworkFormatError(ValueError):
    """A network description file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LayeringError(ValueError):
    """The network is not layered; ``edge`` names the offending link when there is one."""

    def __init__(self, message, edge=None):
        self.edge = edge
        super().__init__(message)
