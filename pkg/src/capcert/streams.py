"""Seedable, splittable random streams.

A stream is a ``numpy.random.Generator`` over the counter-based Philox
bit generator. Sub-streams are keyed by ``(seed, *path)`` through
``SeedSequence`` so a task's draws never depend on which worker ran it or
in what order. Normal variates come from numpy's ziggurat sampler.
"""

import numpy as np

RandomStream = np.random.Generator


def stream(seed, *path):
    """Return the stream for ``seed`` and an optional task path of ints."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    entropy.extend(int(p) for p in path)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def substream(rng, *path):
    """Derive a child stream from ``rng`` without advancing it more than once.

    One 64-bit word is taken from the parent, so sibling calls with the same
    path on the same parent state are still independent draws.
    """
    word = int(rng.integers(0, 2**63 - 1))
    return stream(word, *path)
