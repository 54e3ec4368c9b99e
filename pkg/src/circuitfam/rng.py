"""Seed derivation and generator construction.

Every stochastic routine takes an integer seed and builds a Philox
(counter-based) generator from it, so a given seed yields the same stream on
any platform. Child seeds are derived by hashing a tuple of integers through
``SeedSequence``; that keeps per-circuit and per-split streams independent of
scheduling order.
"""
import numpy as np

MASK64 = (1 << 64) - 1


def make_rng(*key):
    """Philox generator keyed by one or more non-negative integers."""
    words = [int(k) & MASK64 for k in key]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


def derive_seed(*key):
    """Deterministic 64-bit child seed from an integer tuple."""
    words = [int(k) & MASK64 for k in key]
    state = np.random.SeedSequence(words).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
