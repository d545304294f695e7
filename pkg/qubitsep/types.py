"""
Type definitions for qubitsep.

Type aliases shared across the package, plus the tagged value used for
singular evaluations of the conditional density and of the scalar curvature.
"""

from dataclasses import dataclass
from typing import TypeAlias, Union

import numpy as np
import numpy.typing as npt

FloatArray: TypeAlias = npt.NDArray[np.float64]
ComplexArray: TypeAlias = npt.NDArray[np.complex128]
IntArray: TypeAlias = npt.NDArray[np.int64]
BoolArray: TypeAlias = npt.NDArray[np.bool_]


@dataclass(frozen=True)
class SingularValue:
    """Marks an evaluation that diverges (integrable singularity or unbounded curvature)."""

    reason: str

    def __float__(self) -> float:
        return float("inf")


MaybeSingular: TypeAlias = Union[float, SingularValue]


def is_singular(value: MaybeSingular) -> bool:
    """True if ``value`` is the singular tag."""
    return isinstance(value, SingularValue)


__all__ = [
    "FloatArray",
    "ComplexArray",
    "IntArray",
    "BoolArray",
    "SingularValue",
    "MaybeSingular",
    "is_singular",
]
