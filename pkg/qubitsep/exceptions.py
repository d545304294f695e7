"""Exception hierarchy for qubitsep.

Every exception also derives from the built-in type a caller would expect, so
``except ValueError`` keeps working around configuration and domain problems.
"""

from typing import Any, Optional


class QubitSepError(Exception):
    """Base class for all qubitsep errors."""

    def details(self) -> dict[str, Any]:
        """Extra fields for the JSON diagnostic printed by the CLI."""
        return {}


class ConfigurationError(QubitSepError, ValueError):
    """Invalid run or stream configuration."""


class DomainError(QubitSepError, ValueError):
    """An argument lies outside the domain of a coordinate chart."""


class NumericalFailure(QubitSepError, ArithmeticError):
    """A numerical procedure failed to meet its accuracy contract."""


class SingularWeightError(NumericalFailure):
    """The conditional density is singular at a sample point."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index

    # keeps the extra fields when raised inside a worker process
    def __reduce__(self):
        return (type(self), (self.args[0], self.index))

    def details(self) -> dict[str, Any]:
        return {"index": self.index}


class QuadratureError(NumericalFailure):
    """Quadrature stopped before reaching the requested tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error

    def __reduce__(self):
        return (type(self), (self.args[0], self.estimate, self.error))

    def details(self) -> dict[str, Any]:
        return {"estimate": self.estimate, "error": self.error}


class CheckpointError(QubitSepError, OSError):
    """A checkpoint could not be written, read or matched to the run."""
