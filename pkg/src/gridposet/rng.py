"""Deterministic seed derivation for reproducible sampling.

A master seed plus a stream index (or several) is hashed with SHA-256
into a fresh 64-bit seed.  Distinct indices give statistically
independent streams; the same (master, indices) always gives the same
stream, independent of platform or Python hash randomization.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(master: int, *indices: int) -> int:
    """64-bit child seed for the stream named by ``indices``."""
    h = hashlib.sha256()
    h.update(b"gridposet")
    h.update(str(int(master)).encode())
    for ix in indices:
        h.update(b":")
        h.update(str(int(ix)).encode())
    return int.from_bytes(h.digest()[:8], "big")


def stream(master: int, *indices: int) -> random.Random:
    """A ``random.Random`` seeded from the derived child seed."""
    return random.Random(derive_seed(master, *indices))
