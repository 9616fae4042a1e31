"""Exception types shared by the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class ResourceError(EngineError):
    """A carrier or search space exceeds the configured guard or budget."""


class PreconditionError(EngineError):
    """An operation was called on inputs that violate its precondition."""


class InvariantViolation(EngineError):
    """An internal consistency check failed (well-definedness, adequacy)."""


class ParseError(EngineError):
    """An input file or table could not be interpreted."""
