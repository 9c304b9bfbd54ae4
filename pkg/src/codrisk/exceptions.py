"""Exceptions for the codrisk package."""

from typing import Any


class CodError(Exception):
    """Base class for all codrisk errors."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        """Initialize the error.

        Args:
            message: The error message.
            details: Optional values describing the failing input or state.
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}


class CodDomainError(CodError):
    """Parameter or argument outside its admissible range."""

    pass


class CodDegenerateConditioningError(CodDomainError):
    """Conditioning on an event of probability zero (u = 1)."""

    pass


class CodUnsupportedError(CodError):
    """Operation not available for the given family."""

    pass


class CodNumericalError(CodError):
    """Base class for numerical failures."""

    pass


class CodDivergenceError(CodNumericalError):
    """An integral evaluated to a non-finite value."""

    pass


class CodInconsistencyError(CodNumericalError):
    """Two independent evaluations of the same quantity disagree."""

    def __init__(
        self,
        message: str,
        values: dict[str, float] | None = None,
        tolerance: float | None = None,
    ) -> None:
        """Initialize inconsistency error.

        Args:
            message: The error message.
            values: Named values that were compared.
            tolerance: Agreement tolerance that was exceeded.
        """
        detailed_msg = message
        if values:
            listing = ", ".join(f"{name}={value!r}" for name, value in values.items())
            detailed_msg = f"{message}: {listing}"
            if tolerance is not None:
                detailed_msg = f"{detailed_msg} (tolerance {tolerance:g})"

        super().__init__(detailed_msg, dict(values or {}))
        self.values = values or {}
        self.tolerance = tolerance


class CodInsufficientAcceptanceError(CodNumericalError):
    """Rejection sampling kept too few points."""

    pass
