"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`PLDensityError`, so callers (and the CLI) can map them to exit codes.
"""


class PLDensityError(Exception):
    """Base class for all package errors."""


class DomainError(PLDensityError, ValueError):
    """A point or interval lies outside the domain of a function."""


class ParameterError(PLDensityError, ValueError):
    """A numeric parameter is outside its admissible range."""


class PreconditionError(PLDensityError, ValueError):
    """An operation's mathematical precondition does not hold."""


class ResourceError(PLDensityError, RuntimeError):
    """A computation would exceed a configured resource cap."""


class FormatError(PLDensityError, ValueError):
    """A serialized artifact could not be parsed."""


class CertificateError(PLDensityError, AssertionError):
    """A recorded certificate failed re-verification."""
