"""Exception types raised across the package."""


class PstChainError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(PstChainError):
    """A config document, parameter set or CLI invocation is invalid."""


class DomainError(PstChainError):
    """Inputs are structurally valid but outside an operation's domain."""


class NumericalError(PstChainError):
    """A numerical invariant was violated beyond tolerance."""


class NoExactRevivalError(DomainError):
    """The coupling profile has no commensurate spectrum, so no exact
    revival time exists."""


class FitError(PstChainError):
    """A trend fit is ill-posed or contradicts the requested model."""
