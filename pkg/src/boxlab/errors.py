"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """An enumeration or closure would exceed its configured size cap."""


class NoResidueError(ValueError):
    """A required quadratic residue does not exist."""
