from __future__ import annotations

import math

import numpy as np
import pytest

from hbspace import SpaceDescriptor

NUS = (-0.9, -0.5, 0.0, 0.5, 1.0, 2.7)


@pytest.fixture
def pw():
    return SpaceDescriptor.paley_wiener(math.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


def spaces():
    """A representative space of each family."""
    return [SpaceDescriptor.paley_wiener(math.pi), SpaceDescriptor.paley_wiener(2.0),
            SpaceDescriptor.bessel(0.0), SpaceDescriptor.bessel(0.5),
            SpaceDescriptor.bessel(1.3)]
