"""Scrambled Halton sequences in the first m prime bases."""

from .halton import HaltonStream, halton_block, halton_point, radical_inverse
from .permutations import DigitPermutationSet, Scrambling, make_permutations

__all__ = [
    "DigitPermutationSet",
    "HaltonStream",
    "Scrambling",
    "halton_block",
    "halton_point",
    "make_permutations",
    "radical_inverse",
]
