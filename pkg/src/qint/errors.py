"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` that the command line front end uses
directly: 1 for validation/domain problems, 2 for resource exhaustion.
"""

from __future__ import annotations


class QintError(Exception):
    exit_code = 1


class DomainError(QintError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParityError(DomainError):
    """Intersection counts around a pants piece have odd sum."""


class MoveError(DomainError):
    """An elementary move was requested where it is not defined."""


class ValidationError(DomainError):
    """An object failed structural validation; ``report`` lists the violations."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class OracleError(DomainError):
    """Preconditions of the leading-term oracle are not met."""


class ResourceError(QintError):
    exit_code = 2
