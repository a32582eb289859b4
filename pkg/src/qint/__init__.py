"""Exact limit coefficients of curve operators on closed surfaces."""

from .errors import DomainError, MoveError, OracleError, ParityError, QintError, ResourceError, ValidationError
from .laurent import LaurentPoly

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "LaurentPoly",
    "MoveError",
    "OracleError",
    "ParityError",
    "QintError",
    "ResourceError",
    "ValidationError",
]
