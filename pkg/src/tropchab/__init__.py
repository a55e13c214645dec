"""Tropical and p-adic tools for bounding rational points via Chabauty's method."""

from .errors import DomainError, SchemaError

__version__ = "0.1.0"

__all__ = ["DomainError", "SchemaError", "__version__"]
