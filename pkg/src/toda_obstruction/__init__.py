"""Mechanical checks for the nonexistence of Smith-Toda complexes at p > 5."""

from .context import Bidegree, PrimeContext, delta_degree_check, make_context, step5_in_kernel, vi_degree
from .errors import (
    ArtifactError,
    BoundaryEffectsError,
    DomainError,
    InvalidPrimeError,
    PreconditionError,
    RefusalError,
    UsageError,
)

__all__ = [
    "ArtifactError",
    "Bidegree",
    "BoundaryEffectsError",
    "DomainError",
    "InvalidPrimeError",
    "PreconditionError",
    "PrimeContext",
    "RefusalError",
    "UsageError",
    "delta_degree_check",
    "make_context",
    "step5_in_kernel",
    "vi_degree",
]
