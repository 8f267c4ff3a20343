from __future__ import annotations

from typing import Any

__all__ = (
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
)


class CellGTExceptionError(Exception):
    """Base exception class from which all cellgt exceptions inherit."""

    detail: str

    def __init__(self, *args: Any, detail: str = "") -> None:
        """Initialize ``CellGTExceptionError``.

        Args:
            *args: args are converted to :class:`str` before passing to :class:`Exception`
            detail: detail of the exception.
        """
        self.detail = detail
        super().__init__(*(str(arg) for arg in args if arg), detail)

    def __repr__(self) -> str:
        if self.detail:
            return f"{self.__class__.__name__} - {self.detail}"
        return self.__class__.__name__

    def __str__(self) -> str:
        return " ".join(a for a in self.args if a).strip()


class DimensionError(CellGTExceptionError, ValueError):
    """Operand shapes are incompatible."""

    def __init__(self, op: str, *shapes: tuple[int, ...]) -> None:
        self.op = op
        self.shapes = shapes
        rendered = " and ".join(str(tuple(s)) for s in shapes)
        super().__init__(f"{op}: incompatible shapes {rendered}")


class ConfigurationError(CellGTExceptionError, ValueError):
    """A configuration value is invalid; ``field`` names the offending entry."""

    def __init__(self, message: str, *, field: str = "") -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ContractError(CellGTExceptionError, ValueError):
    """A precondition of an operation was violated by its caller."""


class EmptyGraphError(ContractError):
    pass


class EmptySplitError(ContractError):
    def __init__(self, split: str = "") -> None:
        self.split = split
        super().__init__("empty evaluation split", detail=split)


class NumericError(CellGTExceptionError, ArithmeticError):
    """A numerical routine failed (non-convergence, non-finite values)."""


class NumericFailureError(NumericError):
    """Training produced a non-finite loss."""

    def __init__(self, *, step: int, seed: int, stage: str = "") -> None:
        self.step = step
        self.seed = seed
        self.stage = stage
        super().__init__(f"non-finite loss at step {step} (seed {seed})", detail=stage)


class GenerationError(CellGTExceptionError, RuntimeError):
    """Synthetic sample generation gave up."""

    def __init__(self, message: str, *, seed: int) -> None:
        self.seed = seed
        super().__init__(f"{message} (seed {seed})")


class CorpusParseError(CellGTExceptionError, ValueError):
    """A corpus file is missing or malformed."""

    def __init__(self, message: str, *, path: str, field: str = "") -> None:
        self.path = path
        self.field = field
        where = f"{path} [{field}]" if field else path
        super().__init__(f"{where}: {message}")


class CheckpointError(CellGTExceptionError, ValueError):
    pass


class CheckpointMismatchError(CheckpointError):
    """Checkpoint tensors do not fit the model built from the current config."""

    def __init__(self, mismatches: dict[str, tuple[tuple[int, ...] | None, tuple[int, ...] | None]]) -> None:
        self.mismatches = mismatches
        lines = [f"{name}: checkpoint {got} vs model {want}" for name, (got, want) in sorted(mismatches.items())]
        super().__init__("checkpoint does not match model configuration", detail="; ".join(lines))
