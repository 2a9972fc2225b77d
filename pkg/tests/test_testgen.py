from __future__ import annotations

import json
import math

import numpy as np
import pytest

from hbspace import SpaceDescriptor, find_nodes
from hbspace.errors import UnknownNode
from hbspace.kernels import eval_K, eval_K2, eval_P
from hbspace.numerics import QuadratureSpec, integrate_window
from hbspace.space import abs_E_squared
from hbspace.testgen import (E2_FAMILIES, E_FAMILIES, GeneratedFunction, RecipeTerm,
                             make_function, random_recipe, sample_on)

from conftest import spaces


def test_single_P_term(pw):
    sp = pw.with_alpha(0.0)
    f = make_function(sp, [{"family": "P", "at": 1.5, "coefficient": 1.0}])
    z = np.array([0.2 + 0.1j, 3.0, -4.4 + 2j])
    assert np.max(np.abs(f(z) - eval_P(sp, 1.5, z))) <= 1e-13 * np.max(np.abs(f(z)))


def test_kernel_sections():
    sp = SpaceDescriptor.bessel(0.5)
    w = 0.4 + 0.3j
    z = np.array([0.1, 2.0 - 1j])
    f2 = make_function(sp, [RecipeTerm("KernelSection", w, 1.0)])
    f1 = make_function(sp, [RecipeTerm("KernelSectionE", w, 1.0)])
    assert np.allclose(f2(z), eval_K2(sp, w, z).value)
    assert np.allclose(f1(z), eval_K(sp, w, z).value)
    assert f1.member_of == "E" and f2.member_of == "E2"


def test_determinism():
    sp = SpaceDescriptor.bessel(1.3)
    a = random_recipe(sp, 8, seed=42, families=E2_FAMILIES)
    b = random_recipe(sp, 8, seed=42, families=E2_FAMILIES)
    assert a.dumps() == b.dumps()
    z = np.linspace(-3, 3, 17) + 0.5j
    assert np.array_equal(a(z), b(z))


@pytest.mark.parametrize("space", spaces(), ids=str)
@pytest.mark.parametrize("family", E2_FAMILIES + E_FAMILIES)
def test_derivative_by_differences(space, family, rng):
    f = random_recipe(space, 3, seed=int(rng.integers(1 << 30)), families=(family,))
    z = rng.uniform(-8, 8, 6) + 1j * rng.uniform(-1, 1, 6)
    # include node points, where removable singularities are handled
    t, _ = f.value_and_derivative(z)
    nodes = [complex(term.at) for term in f.recipe if np.isreal(term.at)]
    z = np.concatenate([z, np.array(nodes, dtype=complex)])
    h = 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    d = f.derivative(z)
    assert np.allclose(d, fd, rtol=1e-6, atol=1e-6 * max(1, np.max(np.abs(d))))


def test_unknown_node_and_mixing(pw):
    with pytest.raises(UnknownNode):
        make_function(pw, [{"family": "ABoverT", "at": 0.5}])
    with pytest.raises(UnknownNode):
        make_function(pw, [{"family": "Nope", "at": 0.0}])
    with pytest.raises(ValueError):
        make_function(pw, [{"family": "ABoverT", "at": 0.0}, {"family": "BoverT", "at": 1.0}])


def test_json_round_trip():
    f = random_recipe(SpaceDescriptor.bessel(0.0), 5, seed=3,
                      families=("ABoverT", "ABoverS", "KernelSection"))
    g = GeneratedFunction.from_json(json.loads(f.dumps()))
    assert g == f


def test_sample_on():
    sp = SpaceDescriptor.bessel(0.5)
    ns = find_nodes(sp, -10, 10)
    f = random_recipe(sp, 4, seed=9)
    s = sample_on(f, ns)
    v, d = f.value_and_derivative(ns.t)
    assert np.array_equal(s.f, v) and np.array_equal(s.f1, d)


@pytest.mark.parametrize("space", [SpaceDescriptor.paley_wiener(math.pi), SpaceDescriptor.bessel(0.5)], ids=str)
def test_orthogonality(space):
    sp = space.with_alpha(0.0)
    t = find_nodes(sp, -12, 12).t
    s = find_nodes(sp.rotated(-math.pi / 2), -12, 12).t
    members = [make_function(sp, [RecipeTerm("ABoverT", float(t[i]), 1.0)]) for i in (2, 4)]
    members += [make_function(sp, [RecipeTerm("ABoverS", float(s[i]), 1.0)]) for i in (1, 3)]
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10, tail_model="algebraic", tail_exponent=2.0)
    norms = []
    for i, f in enumerate(members):
        for g in members[i:]:
            v = integrate_window(lambda x: (f(x) * np.conj(g(x))).real
                                 / abs_E_squared(sp, x) ** 2, 400.0, spec).value
            if f is g:
                norms.append(v)
            else:
                assert abs(v) <= 1e-5
    assert min(norms) > 0.1
