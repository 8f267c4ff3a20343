from .base_exceptions import (
    CellGTExceptionError,
    CheckpointError,
    CheckpointMismatchError,
    ConfigurationError,
    ContractError,
    CorpusParseError,
    DimensionError,
    EmptyGraphError,
    EmptySplitError,
    GenerationError,
    NumericError,
    NumericFailureError,
)

__all__ = [
    "CellGTExceptionError",
    "CheckpointError",
    "CheckpointMismatchError",
    "ConfigurationError",
    "ContractError",
    "CorpusParseError",
    "DimensionError",
    "EmptyGraphError",
    "EmptySplitError",
    "GenerationError",
    "NumericError",
    "NumericFailureError",
]
