"""Deterministic derivation of independent random streams from one master seed.

Every stochastic routine in the package draws from a generator obtained via
``derive_rng(seed, tag, *indices)``.  The (tag, indices) pair names the
stream, so results do not depend on the order in which streams are consumed
or on how work is split across threads.
"""

import zlib

import numpy as np

__all__ = ["derive_rng", "derive_seed"]


def _entropy(seed, tag, indices):
    if not isinstance(seed, (int, np.integer)):
        raise ValueError("seed must be an integer")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    indices = [int(i) for i in indices]
    if any(i < 0 for i in indices):
        raise ValueError("stream indices must be non-negative")
    # the index count disambiguates (tag,) from (tag, 0): SeedSequence
    # zero-pads its entropy pool, so a trailing 0 alone would collide
    return [seed, zlib.crc32(tag.encode("utf-8")), len(indices), *indices]


def derive_rng(seed, tag, *indices):
    """Return a ``numpy.random.Generator`` unique to (seed, tag, indices).

    Parameters
    ----------
    seed : int
        Non-negative master seed.
    tag : str
        Name of the stream, e.g. ``"sample-torus"``.
    *indices : int
        Optional integer coordinates (replicate number, class index, ...)
        distinguishing parallel streams under the same tag.
    """
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed, tag, indices)))


def derive_seed(seed, tag, *indices):
    """Return a single non-negative derived integer seed for (seed, tag, indices)."""
    ss = np.random.SeedSequence(_entropy(seed, tag, indices))
    return int(ss.generate_state(1, np.uint64)[0])
