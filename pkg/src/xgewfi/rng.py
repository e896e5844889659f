"""Seeded random streams.

All randomness goes through numpy's PCG64 bit generator. A stream for a
given purpose is derived from ``(seed, tag)`` by hashing both with
SHA-256 and feeding the first 16 bytes to ``numpy.random.SeedSequence``,
so a single integer seed reproduces every stage of a run and stages
never share draws.
"""
import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def derive_seed(seed, *tags):
    """Hash ``seed`` and ``tags`` into a new unsigned 64-bit seed."""
    h = hashlib.sha256()
    h.update(int(seed & MASK64).to_bytes(8, "little"))
    for tag in tags:
        h.update(b"\x00")
        h.update(str(tag).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")


def substream(seed, *tags):
    """Return a ``numpy.random.Generator`` dedicated to ``(seed, *tags)``."""
    if seed < 0 or seed > MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    h = hashlib.sha256()
    h.update(int(seed).to_bytes(8, "little"))
    for tag in tags:
        h.update(b"\x00")
        h.update(str(tag).encode("utf-8"))
    entropy = int.from_bytes(h.digest()[:16], "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
