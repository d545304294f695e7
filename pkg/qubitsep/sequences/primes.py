"""Prime bases for the Halton coordinates."""

from qubitsep.exceptions import ConfigurationError

PRIMES: tuple[int, ...] = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
)  # fmt: skip


def first_primes(count: int) -> tuple[int, ...]:
    """Return the first ``count`` primes.

    Raises:
        ConfigurationError: if ``count`` exceeds the stored table
    """
    if count < 1:
        raise ConfigurationError(f"Dimension must be positive, got {count}")
    if count > len(PRIMES):
        raise ConfigurationError(
            f"A Halton stream of dimension {count} needs more than the {len(PRIMES)} stored primes"
        )
    return PRIMES[:count]
