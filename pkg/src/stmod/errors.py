"""Exception hierarchy for the toolkit."""

from __future__ import annotations


class StmodError(ValueError):
    """Base class for all toolkit errors."""


class FieldError(StmodError):
    """Characteristic is not a supported prime."""


class DimensionMismatchError(StmodError):
    """Matrix shapes do not fit the requested operation."""


class GroupTableError(StmodError):
    """A multiplication table is not a group, or an element index is invalid."""


class ModuleValidationError(StmodError):
    """An action is not a representation, a map is not kG-linear, or modules mismatch."""


class PGroupRequiredError(StmodError):
    """Operation needs a p-group whose order is a power of the field characteristic."""


class StableCategoryError(StmodError):
    """Degenerate or ill-posed request in the stable module category."""


class HypothesisError(StmodError):
    """Hypotheses of an explicit ghost construction are violated."""


class InputFileError(StmodError):
    """A group, module or map file could not be parsed."""

    def __init__(self, path: str, message: str, position: str | None = None):
        self.path = path
        self.position = position
        self.detail = message
        location = f"{path}:{position}" if position else path
        super().__init__(f"{location}: {message}")


class SingularMatrixError(StmodError):
    """A square matrix that was required to be invertible is singular."""
