"""Exact tools for systems of equations x_k = 1, x_i + x_j = x_k, x_i * x_j = x_k."""

from .core import Atom, System, canonical_atoms, format_system, parse_system, satisfies, type_of
from .poly import Polynomial

__all__ = [
    "Atom",
    "Polynomial",
    "System",
    "canonical_atoms",
    "format_system",
    "parse_system",
    "satisfies",
    "type_of",
]
