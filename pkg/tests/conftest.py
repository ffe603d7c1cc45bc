"""Shared samplers and fixed point sets for the test suite."""

import numpy as np
import pytest

GOLDEN = 0.6180339887498949


def spiral_points(n, rmin, rmax):
    """Deterministic low-discrepancy points on an annulus in the plane."""
    k = np.arange(n)
    radius = rmin + (rmax - rmin) * k / max(n - 1, 1)
    return radius * np.exp(2j * np.pi * np.mod(GOLDEN * k, 1.0))


def disk_points(rng, n, radius=0.9):
    r = radius * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def plane_points(rng, n, radius=2.0):
    r = radius * np.sqrt(rng.uniform(size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def line_points(rng, n, half_width=5.0):
    return rng.uniform(-half_width, half_width, size=n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
