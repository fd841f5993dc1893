"""Reproducible random-stream derivation.

Every stochastic routine in this package receives either an explicit
``numpy.random.Generator`` or an integer master seed from which it derives
child streams with :func:`derived_seed` / :func:`derived_rng`.  A child
stream is a pure function of ``(master_seed, key)``, so replicated studies
produce bit-identical results for any worker count or execution order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derived_seed", "derived_rng", "as_generator"]


def derived_seed(master_seed: int, *key: int) -> int:
    """Derive a 64-bit child seed from a master seed and an integer key path."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def derived_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Generator seeded from ``(master_seed, key)``; independent across keys."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def as_generator(seed_or_rng) -> np.random.Generator:
    """Accept a Generator, a SeedSequence, or an int seed; return a Generator."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)
