from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from hbspace import (Interpolant, SampleSet, SpaceDescriptor, eval_companions, find_nodes,
                     interpolate, interpolate_bessel_A, interpolate_bessel_B,
                     interpolate_derivative)
from hbspace.errors import NodeMismatch
from hbspace.kernels import eval_P

from conftest import spaces

Z = np.array([0.3 + 0.2j, -1.7, 2.25 - 0.8j, 0.0, 1.0, 4.9j * 0.2, -3.3 + 1.1j])


def _single(space, t, f, f1, window=5.0):
    ns = find_nodes(space, -window, window)
    return SampleSet.from_arrays(ns, [t], [f], [f1])


def test_vaaler_value_term(pw):
    s = _single(pw, 0.0, 1.0, 0.0)
    ref = np.sinc(Z) ** 2
    assert np.max(np.abs(interpolate(pw, s, Z).value - ref)) <= 1e-12


def test_vaaler_derivative_term(pw):
    for m in (-2.0, 0.0, 3.0):
        s = _single(pw, m, 0.0, 1.0)
        with np.errstate(all="ignore"):
            ref = np.sin(np.pi * Z) ** 2 / (np.pi ** 2 * (Z - m))
        ref = np.where(Z == m, 0.0, ref)
        assert np.max(np.abs(interpolate(pw, s, Z).value - ref)) <= 1e-12


def test_zero_samples(pw):
    ns = find_nodes(pw, -10, 10)
    s = SampleSet.from_arrays(ns, ns.t, np.zeros(len(ns)), np.zeros(len(ns)))
    assert np.all(interpolate(pw, s, Z).value == 0)


def test_cos_sin_reduction(rng):
    b = SpaceDescriptor.bessel(-0.5)
    p1 = SpaceDescriptor.paley_wiener(1.0)
    nb, npw = find_nodes(b, -40, 40), find_nodes(p1, -40, 40)
    assert np.allclose(nb.t, npw.t, atol=1e-12)
    f = rng.standard_normal(len(nb)) + 1j * rng.standard_normal(len(nb))
    d = rng.standard_normal(len(nb))
    vb = interpolate_bessel_B(-0.5, SampleSet.from_arrays(nb, nb.t, f, d), Z).value
    vp = interpolate(p1, SampleSet.from_arrays(npw, npw.t, f, d), Z).value
    assert np.max(np.abs(vb - vp)) <= 1e-12 * max(1, np.max(np.abs(vp)))


@pytest.mark.parametrize("nu", [0.0, 0.5, 2.0])
def test_single_node_P_exact(nu):
    sp = SpaceDescriptor.bessel(nu, alpha=math.pi / 2)
    ns = find_nodes(sp, -30, 30)
    base = SpaceDescriptor.bessel(nu)
    for s in (ns.t[len(ns) // 2 + 1], ns.t[-3]):
        c = eval_companions(base, s)
        samples = SampleSet.from_arrays(ns, [s], [c.a1.real ** 2], [c.a1.real * c.a2.real])
        got = interpolate_bessel_A(nu, samples, Z).value
        ref = eval_P(base, s, Z)
        assert np.max(np.abs(got - ref)) <= 1e-10 * max(1, np.max(np.abs(ref)))


@pytest.mark.parametrize("space", spaces(), ids=str)
def test_idempotence(space, rng):
    ns = find_nodes(space, -15, 15)
    f = rng.standard_normal(len(ns)) + 1j * rng.standard_normal(len(ns))
    d = rng.standard_normal(len(ns)) + 1j * rng.standard_normal(len(ns))
    G = Interpolant(space, SampleSet.from_arrays(ns, ns.t, f, d))
    again = SampleSet.from_arrays(ns, ns.t, G(ns.t), G.derivative(ns.t))
    assert np.allclose(again.f, f, rtol=0, atol=1e-11 * np.max(np.abs(f)))
    assert np.allclose(again.f1, d, rtol=0, atol=1e-9 * np.max(np.abs(d)))
    H = Interpolant(space, again)
    assert np.max(np.abs(H(Z) - G(Z))) <= 1e-11 * max(1, np.max(np.abs(G(Z))))


@pytest.mark.parametrize("space", spaces(), ids=str)
def test_derivative_consistency(space, rng):
    ns = find_nodes(space, -15, 15)
    f = rng.standard_normal(len(ns))
    d = rng.standard_normal(len(ns))
    G = Interpolant(space, SampleSet.from_arrays(ns, ns.t, f, d))
    h = 1e-5
    for i in range(0, len(ns), 3):
        t = ns.t[i]
        fd = (G(t + h) - G(t - h)) / (2 * h)
        assert abs(fd - d[i]) <= 1e-6 * max(1, abs(d[i]))
        assert abs(interpolate_derivative(space, G.samples, t) - d[i]) <= 1e-9 * max(1, abs(d[i]))


def test_nu_continuity(rng):
    p1 = SpaceDescriptor.paley_wiener(1.0)
    npw = find_nodes(p1, -40, 40)
    f = rng.standard_normal(len(npw))
    d = rng.standard_normal(len(npw))
    vp = interpolate(p1, SampleSet.from_arrays(npw, npw.t, f, d), Z).value
    for nu in (-0.5 - 1e-6, -0.5 + 1e-6):
        nb = find_nodes(SpaceDescriptor.bessel(nu), -40, 40)
        assert len(nb) == len(npw)
        vb = interpolate_bessel_B(nu, SampleSet.from_arrays(nb, nb.t, f, d), Z).value
        assert np.max(np.abs(vb - vp)) <= 1e-4


def test_against_mpmath_oracle(pw):
    # F = sin(pi z) cos(pi z) / (pi (z - 1/2)): samples at integers, series by mpmath
    ns = find_nodes(pw, -60, 60)
    x = ns.t
    F = lambda z: np.sin(np.pi * z) * np.cos(np.pi * z) / (np.pi * (z - 0.5))
    dF = lambda z: (np.cos(2 * np.pi * z) / (z - 0.5)
                    - np.sin(2 * np.pi * z) / (2 * np.pi * (z - 0.5) ** 2))
    s = SampleSet.from_arrays(ns, x, F(x), dF(x))
    z0 = 0.3 + 0.2j
    got = interpolate(pw, s, z0).value
    mpmath.mp.dps = 30
    zz = mpmath.mpc(z0.real, z0.imag)
    tot = mpmath.mpf(0)
    for n, fv, dv in zip(x, s.f, s.f1):
        tot += mpmath.mpc(fv) / (zz - n) ** 2 + mpmath.mpc(dv) / (zz - n)
    ref = complex((mpmath.sin(mpmath.pi * zz) / mpmath.pi) ** 2 * tot)
    assert abs(got - ref) <= 1e-12


def test_sample_set_errors(pw):
    ns = find_nodes(pw, -5, 5)
    with pytest.raises(NodeMismatch):
        SampleSet.from_arrays(ns, [0.5], [1.0], [0.0])
    with pytest.raises(NodeMismatch):
        SampleSet.from_arrays(ns, [1.0, 1.0], [1.0, 2.0], [0.0, 0.0])
    s = SampleSet.from_arrays(ns, [2.0, -1.0], [1.0, 2.0], [0.0, 1.0])
    assert list(s.t) == [-1.0, 2.0]
    back = SampleSet.from_json(s.to_json())
    assert np.array_equal(back.f, s.f) and np.array_equal(back.t, s.t)


def test_eval_result_tail(pw):
    ns = find_nodes(pw, -20, 20)
    s = SampleSet.from_arrays(ns, ns.t, np.ones(len(ns)), np.zeros(len(ns)))
    r = interpolate(pw, s, np.array([0.5, 10.5]))
    assert r.terms_used == len(ns)
    assert np.all(np.asarray(r.tail_estimate) > 0)
