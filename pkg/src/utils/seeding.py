"""
Stable seed derivation.

Seeds are derived from a digest of their identifying parts so that the same
(seed, algorithm, trial) always maps to the same stream, whatever order
workers run in and whatever PYTHONHASHSEED is.
"""

import hashlib

_SEED_MASK = (1 << 63) - 1


def derive_seed(*parts: object) -> int:
    """Hash the given parts into a non-negative 63-bit seed."""
    text = "\x1f".join(str(part) for part in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _SEED_MASK
