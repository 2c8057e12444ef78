"""Shared test utilities: deterministic stand-ins and independent oracles."""

from __future__ import annotations

import math

import numpy as np


class StubRng:
    """Feeds preset draws to the operators under test.

    ``randoms`` serves rng.random() (scalar and sized), ``ints`` serves
    rng.integers(), ``uniforms`` serves rng.uniform() vectors verbatim.
    """

    def __init__(self, randoms=(), ints=(), uniforms=()):
        self._randoms = list(randoms)
        self._ints = list(ints)
        self._uniforms = list(uniforms)

    def random(self, size=None):
        if size is None:
            return self._randoms.pop(0)
        return np.array([self._randoms.pop(0) for _ in range(size)])

    def integers(self, high):
        return self._ints.pop(0)

    def uniform(self, low, high, size=None):
        values = self._uniforms.pop(0)
        if size is None:
            return values
        return np.asarray(values, dtype=float)


def scan_nearest_better(positions, fitness, i):
    """Exhaustive reference for the nearest strictly-better member.

    Pure-python scan, independent of the library's vectorized path.
    Returns None when no member beats member i.
    """
    best_index = None
    best_distance = None
    for k in range(len(positions)):
        if k == i or not (fitness[k] < fitness[i]):
            continue
        distance = math.dist(list(positions[i]), list(positions[k]))
        if best_index is None or distance < best_distance:
            best_index = k
            best_distance = distance
    return best_index
