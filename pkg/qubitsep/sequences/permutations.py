"""Digit permutations used to scramble the van der Corput coordinates.

Three families are available: the identity (plain Halton), Faure's
deterministic recursive permutations, and pseudo-random permutations that are
a pure function of a 64-bit seed and the base.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from qubitsep.exceptions import ConfigurationError
from qubitsep.sequences.primes import first_primes
from qubitsep.types import IntArray

SEED_LIMIT = 2**64


class Scrambling(str, Enum):
    """Provenance of a digit permutation set."""

    IDENTITY = "none"
    FAURE = "faure"
    SEEDED = "seeded"


@dataclass(frozen=True)
class DigitPermutationSet:
    """One digit bijection per prime base.

    ``permutations[j][d]`` is the image of digit ``d`` in base ``bases[j]``.
    """

    bases: tuple[int, ...]
    permutations: tuple[IntArray, ...]
    provenance: Scrambling
    seed: Optional[int] = None

    @property
    def dimension(self) -> int:
        return len(self.bases)

    def describe(self) -> dict[str, Optional[str | int]]:
        """Provenance fields echoed into reports."""
        return {"scramble": self.provenance.value, "seed": self.seed}


@lru_cache(maxsize=None)
def _faure_permutation(base: int) -> tuple[int, ...]:
    if base == 2:
        return (0, 1)
    if base % 2 == 0:
        half = _faure_permutation(base // 2)
        return tuple(2 * x for x in half) + tuple(2 * x + 1 for x in half)
    previous = _faure_permutation(base - 1)
    center = (base - 1) // 2
    shifted = [x + 1 if x >= center else x for x in previous]
    return tuple(shifted[:center] + [center] + shifted[center:])


def faure_permutation(base: int) -> IntArray:
    """Faure's permutation of {0, ..., base-1}."""
    if base < 2:
        raise ConfigurationError(f"Base must be at least 2, got {base}")
    return np.array(_faure_permutation(base), dtype=np.int64)


def seeded_permutation(seed: int, base: int) -> IntArray:
    """Pseudo-random permutation of {0, ..., base-1} determined by (seed, base) alone."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, base]))
    return rng.permutation(base).astype(np.int64)


def make_permutations(
    provenance: Scrambling, dimension: int, seed: Optional[int] = None
) -> DigitPermutationSet:
    """Build the digit permutations for the first ``dimension`` primes.

    Args:
        provenance: which permutation family to use
        dimension: number of coordinates (prime bases)
        seed: 64-bit seed, required for ``Scrambling.SEEDED`` and ignored otherwise

    Raises:
        ConfigurationError: if the dimension exceeds the prime table or the seed is missing or out of range
    """
    bases = first_primes(dimension)
    if provenance is Scrambling.IDENTITY:
        perms = tuple(np.arange(b, dtype=np.int64) for b in bases)
        seed = None
    elif provenance is Scrambling.FAURE:
        perms = tuple(faure_permutation(b) for b in bases)
        seed = None
    else:
        if seed is None or not 0 <= seed < SEED_LIMIT:
            raise ConfigurationError(f"Seeded scrambling needs a seed in [0, 2**64), got {seed}")
        perms = tuple(seeded_permutation(seed, b) for b in bases)
    for base, perm in zip(bases, perms):
        if not np.array_equal(np.sort(perm), np.arange(base)):
            raise ConfigurationError(f"Digit map for base {base} is not a bijection")
    return DigitPermutationSet(bases=bases, permutations=perms, provenance=provenance, seed=seed)
