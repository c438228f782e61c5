"""Exception types shared across the package."""


class SurroundError(Exception):
    """Base class for all package errors."""


class ParseError(SurroundError):
    """Malformed graph input. Carries the byte offset where parsing failed."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ValidationError(SurroundError):
    """Structurally invalid graph data (loops, parallel edges, asymmetry)."""


class EmbeddingError(SurroundError):
    """Rotation system inconsistent with the graph or with Euler's formula."""


class NoPathError(SurroundError):
    """Requested a path between vertices in different components."""


class RuleViolation(SurroundError):
    """A move that breaks the game rules. Names the violated rule."""


class GuardSetupError(SurroundError):
    """Guard precondition (geodesic / geodesically closed / bipartite) fails."""


class SizeError(SurroundError):
    """State space exceeds the configured memory budget."""

    def __init__(self, message, required_bytes=None):
        super().__init__(message)
        self.required_bytes = required_bytes


class StrategyError(SurroundError):
    """Internal strategy invariant broke; indicates a bug, not a robber win."""
