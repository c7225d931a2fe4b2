"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: unknown strategy, bad threshold, unresolvable evaluator."""


class ParseError(ValueError):
    """Malformed document. Carries the offending row index when known."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"{message} (row {row})")
        self.row = row


class StateError(RuntimeError):
    """Operation applied to a run or set in the wrong state."""


class ModelError(ValueError):
    """Inconsistent model definition or dimension mismatch during inference."""


class ExhaustedSetError(RuntimeError):
    """Every candidate was filtered out; the run cannot proceed."""
