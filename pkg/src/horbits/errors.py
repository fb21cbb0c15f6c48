"""Exception types shared across the package."""
from __future__ import annotations

__all__ = [
    "DomainError",
    "GroupMismatchError",
    "NonDominantError",
    "SizeLimitError",
    "MalformedMultisetError",
]


class DomainError(ValueError):
    """A request that is syntactically fine but violates a domain contract."""


class GroupMismatchError(DomainError):
    """Operands belong to different groups."""


class NonDominantError(DomainError):
    """A dominant weight was required but a coordinate is negative."""


class SizeLimitError(DomainError):
    """A computation would exceed its configured size guard."""


class MalformedMultisetError(DomainError):
    """A weight multiset is not a union of whole orbits."""
