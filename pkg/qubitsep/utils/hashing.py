"""Stable 64-bit hashes for run configurations."""

import json
from typing import Any

import murmurhash  # type: ignore # Missing library stubs


def canonical_json(payload: dict[str, Any]) -> str:
    """Serialize a JSON-compatible dict with sorted keys and no whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def config_hash(payload: dict[str, Any]) -> str:
    """Return a 16-hex-digit hash of a JSON-compatible configuration dict.

    Two 32-bit murmur3 hashes of the canonical JSON (seeds 0 and 1) are
    concatenated into one 64-bit value.
    """
    data = canonical_json(payload).encode()
    high = murmurhash.hash(data, seed=0) & 0xFFFFFFFF
    low = murmurhash.hash(data, seed=1) & 0xFFFFFFFF
    return f"{(high << 32) | low:016x}"
