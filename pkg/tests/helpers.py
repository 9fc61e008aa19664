"""Shared random-model builders for the test suite."""

from __future__ import annotations

import numpy as np

from ppdiv import DiscreteIntensity, GridIntensity, common_reference

ATOM_IDS = tuple("abcdefghijkl")


def random_discrete(rng, n_atoms=None, allow_zeros=False, scale=5.0):
    n = n_atoms or int(rng.integers(2, 9))
    weights = rng.uniform(0.05, scale, size=n)
    if allow_zeros:
        mask = rng.uniform(size=n) < 0.25
        weights = np.where(mask, 0.0, weights)
    return DiscreteIntensity(tuple(zip(ATOM_IDS[:n], map(float, weights))))


def random_discrete_pair(rng, n_atoms=None, allow_zeros=False, scale=5.0):
    n = n_atoms or int(rng.integers(2, 9))
    a = random_discrete(rng, n, allow_zeros, scale)
    b = random_discrete(rng, n, allow_zeros, scale)
    return a, b, common_reference(a, b)


def random_grid(rng, n_cells=None, width=None, allow_zeros=False, scale=4.0):
    n = n_cells or int(rng.integers(2, 9))
    w = width or float(rng.uniform(0.5, 3.0))
    values = rng.uniform(0.05, scale, size=n)
    if allow_zeros:
        mask = rng.uniform(size=n) < 0.25
        values = np.where(mask, 0.0, values)
    return GridIntensity([(0.0, w)], [n], tuple(map(float, values)))


def random_grid_pair(rng, n_cells=None, allow_zeros=False, scale=4.0):
    n = n_cells or int(rng.integers(2, 9))
    w = float(rng.uniform(0.5, 3.0))
    a = random_grid(rng, n, w, allow_zeros, scale)
    b = random_grid(rng, n, w, allow_zeros, scale)
    return a, b, common_reference(a, b)


def random_pair(rng, allow_zeros=False):
    """Randomly a discrete or a grid pair, as the property suites want."""
    if rng.uniform() < 0.5:
        return random_discrete_pair(rng, allow_zeros=allow_zeros)
    return random_grid_pair(rng, allow_zeros=allow_zeros)
