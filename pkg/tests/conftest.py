"""Shared fixtures and small helpers for the test suite."""

import math

import numpy as np
import pytest

from qdiscord import (
    MeasurementDirection,
    bloch_rotation,
    random_state,
    random_unitary,
    triple_from_matrix,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_direction(rng) -> MeasurementDirection:
    return MeasurementDirection(rng.standard_normal(3))


def random_triple(rng, rank=None):
    return triple_from_matrix(random_state(rank=rank, rng=rng))


def random_rotation(rng) -> np.ndarray:
    return bloch_rotation(random_unitary(2, rng))


def angle_between_axes(u: np.ndarray, v: np.ndarray) -> float:
    """Angle between measurement axes, identifying antipodal directions."""
    c = abs(float(np.dot(u, v))) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(min(c, 1.0))
