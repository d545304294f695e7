"""Random-access scrambled Halton points.

Coordinate j of point i is the scrambled radical inverse of i in the j-th
prime base. Every point is a pure function of its index and the permutation
set, so index ranges can be evaluated in any order by any number of workers.

Digits are kept while base**k <= 2**53: numerator and denominator are then
exact doubles and each coordinate stays strictly below 1, also for
permutations that do not fix 0.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from qubitsep.exceptions import ConfigurationError
from qubitsep.sequences.permutations import DigitPermutationSet
from qubitsep.types import FloatArray, IntArray

_MANTISSA_LIMIT = 2**53


@lru_cache(maxsize=None)
def digit_count(base: int) -> int:
    """Largest k with base**k <= 2**53."""
    count = 0
    power = 1
    while power * base <= _MANTISSA_LIMIT:
        power *= base
        count += 1
    return count


def radical_inverse_array(indices: IntArray, base: int, perm: Sequence[int] | IntArray) -> FloatArray:
    """Vectorised scrambled radical inverse of non-negative ``indices`` in ``base``."""
    ndigits = digit_count(base)
    remaining = np.asarray(indices, dtype=np.int64).copy()
    if remaining.size and (remaining.min() < 0 or remaining.max() >= base**ndigits):
        raise ConfigurationError(f"Index out of range for base {base}")
    table = np.asarray(perm, dtype=np.int64)
    numerator = np.zeros_like(remaining)
    scale = base ** (ndigits - 1)
    for k in range(ndigits):
        if not remaining.any():
            # all higher digits are 0 and map to table[0]
            numerator += int(table[0]) * ((base ** (ndigits - k) - 1) // (base - 1))
            break
        remaining, digit = np.divmod(remaining, base)
        numerator += table[digit] * scale
        scale //= base
    return numerator / float(base**ndigits)


def radical_inverse(index: int, base: int, perm: Sequence[int] | IntArray) -> float:
    """Scrambled van der Corput value of ``index`` in ``base``.

    Returns sum_k perm(d_k) * base**(-k-1) where index = sum_k d_k * base**k.
    """
    if base < 2:
        raise ConfigurationError(f"Base must be at least 2, got {base}")
    if len(perm) != base:
        raise ConfigurationError(f"Digit map has {len(perm)} entries for base {base}")
    return float(radical_inverse_array(np.array([index], dtype=np.int64), base, perm)[0])


@dataclass(frozen=True)
class HaltonStream:
    """Scrambled Halton points in ``dimension`` coordinates, starting at ``start_index``."""

    perms: DigitPermutationSet
    start_index: int = 1

    def __post_init__(self):
        if self.start_index < 1:
            raise ConfigurationError("Index 0 is never emitted; start_index must be >= 1")

    @property
    def dimension(self) -> int:
        return self.perms.dimension

    def point(self, index: int) -> FloatArray:
        return halton_point(index, self)

    def block(self, start: int, count: int) -> FloatArray:
        return halton_block(self, start, count)

    def stream(self, count: int, chunk: int = 4096) -> Iterator[FloatArray]:
        """Sequentially yield ``count`` points from ``start_index`` in chunks."""
        emitted = 0
        while emitted < count:
            n = min(chunk, count - emitted)
            yield self.block(self.start_index + emitted, n)
            emitted += n


def halton_block(stream: HaltonStream, start: int, count: int) -> FloatArray:
    """Points ``start, ..., start+count-1`` as a (count, dimension) array."""
    if start < 1:
        raise ConfigurationError(f"Halton indices start at 1, got {start}")
    indices = np.arange(start, start + count, dtype=np.int64)
    out = np.empty((count, stream.dimension), dtype=np.float64)
    for j, (base, perm) in enumerate(zip(stream.perms.bases, stream.perms.permutations)):
        out[:, j] = radical_inverse_array(indices, base, perm)
    return out


def halton_point(index: int, stream: HaltonStream) -> FloatArray:
    """The ``index``-th point of ``stream`` (index >= 1)."""
    return halton_block(stream, index, 1)[0]
