"""Exception types shared across the package."""


class ShascanError(Exception):
    """Base class for package errors."""


class CapacityError(ShascanError):
    """A buffer or table would exceed the configured memory budget."""


class CertificationError(ShascanError):
    """A rounded quantity failed its certification test."""


class VanishingLError(ShascanError):
    """The central L-value is below the vanishing threshold."""


class OverflowGuardError(ShascanError):
    """An accumulator or intermediate product would overflow its type."""
