"""Seed derivation.

Every random consumer gets its own ``numpy.random.Generator`` whose seed is
derived from a parent seed and a label with :func:`mix`.  Parallel work
must derive a child seed per unit of work and never share a generator.
"""
import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x):
    x = (x + _GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _label_bits(label):
    if isinstance(label, bool) or not isinstance(label, int):
        digest = hashlib.blake2b(str(label).encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    return label & MASK64


def mix(parent_seed, label):
    """Child seed for ``label`` under ``parent_seed`` (both reduced to 64 bits)."""
    s = _splitmix64(int(parent_seed) & MASK64)
    return _splitmix64(s ^ _splitmix64(_label_bits(label)))


def generator(seed, *labels):
    """Generator for the stream reached by mixing ``labels`` into ``seed`` in order."""
    s = int(seed) & MASK64
    for label in labels:
        s = mix(s, label)
    return np.random.Generator(np.random.PCG64(s))
