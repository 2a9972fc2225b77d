from __future__ import annotations

import math

import numpy as np
import pytest

from hbspace import SpaceDescriptor, eval_companions, eval_E, phase_derivative
from hbspace.kernels import eval_K
from hbspace.space import abs_E_squared, eval_E_star, unwrapped_phase

from conftest import spaces

FIELDS = ("a", "b", "a1", "b1", "a2", "b2", "a3", "b3")


def test_pw_origin(pw):
    c = eval_companions(pw, 0.0)
    assert (c.a, c.b) == (1, 0)
    assert abs(c.b1 - math.pi) < 1e-15


def test_bessel_examples():
    c = eval_companions(SpaceDescriptor.bessel(-0.5), 1.3)
    assert abs(c.a - math.cos(1.3)) <= 1e-12 and abs(c.b - math.sin(1.3)) <= 1e-12
    c = eval_companions(SpaceDescriptor.bessel(0.5), 2.0)
    assert abs(c.a - math.sin(2.0) / 2) <= 1e-12


def test_E_examples(pw):
    x = np.linspace(-30, 30, 101)
    assert np.allclose(np.abs(eval_E(pw, x)), 1.0, atol=1e-15)
    b0 = SpaceDescriptor.bessel(0.0)
    assert abs(eval_E_star(b0, 1j)) < abs(eval_E(b0, 1j))
    r = abs(eval_E(b0, 10.0)) ** -2 / 10.0
    assert 0.2 < r < 5.0


def test_phase_derivative_examples(pw):
    assert phase_derivative(pw, 0.37) == math.pi
    assert abs(phase_derivative(SpaceDescriptor.bessel(-0.5), 2.0) - 1) < 1e-14
    b1 = SpaceDescriptor.bessel(1.0)
    k = eval_K(b1, 3.0, 3.0).value.real
    assert abs(phase_derivative(b1, 3.0) - math.pi * k / abs_E_squared(b1, 3.0)) <= 1e-8


@pytest.mark.parametrize("space", spaces(), ids=str)
def test_reality(space, rng):
    t = rng.uniform(-50, 50, 1000)
    c = eval_companions(space.with_alpha(0.7), t)
    for f in FIELDS:
        assert np.max(np.abs(np.imag(getattr(c, f)))) <= 1e-12


@pytest.mark.parametrize("space", spaces(), ids=str)
def test_rotation_by_pi(space, rng):
    z = rng.uniform(-10, 10, 50) + 1j * rng.uniform(-2, 2, 50)
    s1 = space.with_alpha(0.4)
    # alpha is stored mod pi, so rotate the base companions by hand
    c1 = eval_companions(s1, z)
    base = eval_companions(space.with_alpha(0.0), z)
    ca, sa = math.cos(0.4 + math.pi), math.sin(0.4 + math.pi)
    for k in range(4):
        A, B = getattr(base, FIELDS[2 * k]), getattr(base, FIELDS[2 * k + 1])
        assert np.allclose(-(ca * A + sa * B), getattr(c1, FIELDS[2 * k]), rtol=1e-12, atol=1e-12)
        assert np.allclose(-(-sa * A + ca * B), getattr(c1, FIELDS[2 * k + 1]), rtol=1e-12, atol=1e-12)
    assert space.with_alpha(0.4 + math.pi).alpha == pytest.approx(s1.alpha, abs=1e-15)


def test_pythagoras_cos_sin(rng):
    t = rng.uniform(-100, 100, 500)
    c = eval_companions(SpaceDescriptor.bessel(-0.5), t)
    assert np.max(np.abs(c.a.real ** 2 + c.b.real ** 2 - 1)) <= 1e-12


@pytest.mark.parametrize("space", spaces(), ids=str)
def test_hermite_biehler(space, rng):
    z = rng.uniform(-20, 20, 200) + 1j * rng.uniform(1e-3, 5, 200)
    assert np.all(np.abs(eval_E_star(space, z)) < np.abs(eval_E(space, z)))


@pytest.mark.parametrize("space", spaces(), ids=str)
def test_phase_positive(space, rng):
    assert np.all(phase_derivative(space, rng.uniform(-100, 100, 1000)) > 0)


def test_unwrapped_phase_odd():
    s = SpaceDescriptor.bessel(1.0)
    t = np.linspace(-20, 20, 4001)
    ph = unwrapped_phase(s, t)
    assert abs(ph[2000]) < 1e-12
    assert np.allclose(ph, -ph[::-1], atol=1e-9)


def test_descriptor_validation_and_json():
    with pytest.raises(ValueError):
        SpaceDescriptor.paley_wiener(-1.0)
    with pytest.raises(ValueError):
        SpaceDescriptor.bessel(-1.0)
    s = SpaceDescriptor.bessel(0.5, alpha=-math.pi / 2)
    assert s.alpha == pytest.approx(math.pi / 2)
    assert SpaceDescriptor.from_json(s.to_json()) == s
