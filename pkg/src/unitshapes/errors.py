"""Exception hierarchy shared by all modules.

Each class carries the CLI exit code it maps to.
"""


class UnitShapesError(Exception):
    exit_code = 1


class ConfigurationError(UnitShapesError, ValueError):
    exit_code = 2


class ValidationError(UnitShapesError, ValueError):
    exit_code = 3


class DomainError(UnitShapesError, ValueError):
    exit_code = 3


class RankError(DomainError):
    pass


class DataError(UnitShapesError, ValueError):
    exit_code = 4


class ParseError(DataError):
    pass


class PrecisionError(UnitShapesError, ArithmeticError):
    exit_code = 3


class SearchExhausted(UnitShapesError):
    """A bounded search finished without a hit.

    This is a statement about the search bound, not a proof of absence.
    """

    exit_code = 1


class TransportError(UnitShapesError, OSError):
    exit_code = 5


class StageError(UnitShapesError):
    """Wraps an error raised inside one stage of the field pipeline."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
