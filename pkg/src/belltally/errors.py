"""Exception types shared across the package."""

from __future__ import annotations


class BelltallyError(Exception):
    """Base class for every error raised by this package."""


class InputValidationError(BelltallyError, ValueError):
    """An argument violates its documented contract."""


class ConfigurationError(BelltallyError):
    """A required configuration entry is missing or unresolvable."""


class ZeroProbabilityError(BelltallyError, ArithmeticError):
    """Conditioning on an event of numerically zero probability."""
