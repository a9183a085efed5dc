"""Exception taxonomy shared across the package.

Every error raised on purpose derives from DyadicIntError so callers
(and the CLI) can distinguish expected failures from genuine bugs.
"""


class DyadicIntError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DyadicIntError):
    """An input value lies outside the mathematical domain of an operation."""


class RangeError(DyadicIntError):
    """An input is structurally valid but outside the supported range."""


class ConfigurationError(DyadicIntError):
    """Supplied components are inconsistent with each other."""


class IntegrandError(DyadicIntError):
    """An integrand failed to evaluate at a series node.

    The offending node is attached so the caller can report exactly
    where the evaluation blew up.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DepthExhaustedError(DyadicIntError):
    """The adaptive reference integrator hit its recursion depth cap."""
