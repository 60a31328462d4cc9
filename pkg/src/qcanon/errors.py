"""Exception types shared across the package."""


class QCanonError(Exception):
    """Base class for errors raised by this package."""


class IntegrityError(QCanonError):
    """An internal consistency check failed.

    Raised when a computed quantity contradicts something that must hold
    (a non-Laurent structure constant, a missing unitriangular order, a
    nonzero Serre ghost, ...).  It always signals a bug or a bad input.
    """


class CapacityError(QCanonError):
    """The request exceeds the configured size limits."""


class DomainError(QCanonError, ValueError):
    """An argument is outside the domain of an operation."""
