"""Exception hierarchy shared across the package."""


class IsingEmbedError(Exception):
    """Base class for all package errors."""


class DomainError(IsingEmbedError, ValueError):
    """Input refers to unknown ids, mismatched domains or invalid values."""


class SizeError(IsingEmbedError):
    """An exhaustive routine was asked to work above its size guard."""


class ConnectivityError(IsingEmbedError):
    """A graph that must be connected is not."""


class StructureError(IsingEmbedError):
    """A graph does not have the required shape (e.g. not a tree)."""


class EmbeddingError(IsingEmbedError):
    """The embedding violates one of the minor-embedding conditions."""


class PreprocessableError(IsingEmbedError):
    """A vertex weight dominates its incident strengths; run ``preprocess`` first."""


class InstanceError(IsingEmbedError):
    """A weight distribution instance violates ``lambda < sigma(V)`` or ``gamma > 0``."""


class LPError(IsingEmbedError):
    """The simplex solver reported infeasible, unbounded or stalled."""


class ParseError(IsingEmbedError):
    """A file is not valid JSON or lacks a required field."""
