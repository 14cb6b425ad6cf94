"""Exception types shared across the package."""


class FireclusterError(Exception):
    """Base class for all package errors."""


class DomainError(FireclusterError, ValueError):
    """An argument violates an operation's precondition."""


class InvalidCoordinateError(DomainError):
    """Longitude or latitude is non-finite or outside its valid range."""


class ConfigError(FireclusterError, ValueError):
    """A configuration value or ingest specification is invalid."""


class IngestError(FireclusterError, RuntimeError):
    """Input data could not be parsed or validated."""
