"""Generators for functions known to lie in H(E) or H(E^2).

Families (``t`` a zero of ``B_alpha``, ``s`` a zero of ``A_alpha``)::

    ABoverT         A_alpha B_alpha / (z - t)      H(E^2)
    ABoverS         A_alpha B_alpha / (z - s)      H(E^2)
    P               A_alpha^2 / (z - s)^2          H(E^2)
    Q               A_alpha^2 / (z - s)            H(E^2)
    KernelSection   K_2(w, z)                      H(E^2)
    BoverT          B_alpha / (z - t)              H(E)
    AoverS          A_alpha / (z - s)              H(E)
    KernelSectionE  K(w, z)                        H(E)

Values and derivatives are computed from the companion derivatives by the
product and quotient rules; removable singularities use Taylor data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownNode
from .interp import SampleSet
from .kernels import eval_K, eval_K2, eval_K2_dz, eval_K_dz, eval_P, eval_P_dz
from .nodes import NodeSet, find_nodes
from .space import SpaceDescriptor, eval_companions

E2_FAMILIES = ("ABoverT", "ABoverS", "P", "Q", "KernelSection")
E_FAMILIES = ("BoverT", "AoverS", "KernelSectionE")
FAMILIES = E2_FAMILIES + E_FAMILIES
_AT_T = ("ABoverT", "BoverT")
_AT_S = ("ABoverS", "P", "Q", "AoverS")
_NEAR = 1e-4
_MID = 1e-2
_NODE_TOL = 1e-9


@dataclass(frozen=True)
class RecipeTerm:
    family: str
    at: complex  # node location, or kernel point w
    coefficient: complex = 1.0

    def to_json(self) -> dict:
        at = complex(self.at)
        c = complex(self.coefficient)
        return {"family": self.family, "at": [at.real, at.imag],
                "coefficient": [c.real, c.imag]}

    @classmethod
    def from_json(cls, d: dict) -> "RecipeTerm":
        at = d["at"]
        at = complex(*at) if isinstance(at, (list, tuple)) else complex(at)
        c = d.get("coefficient", 1.0)
        c = complex(*c) if isinstance(c, (list, tuple)) else complex(c)
        return cls(d["family"], at, c)


def _over_linear(G, G1, g, h, Gx=0.0, scale=1.0):
    """Value and derivative of ``G(z)/(z - x)`` where ``G(x) = 0``.

    ``g`` holds the first three derivatives of ``G`` at ``x`` and
    ``h = z - x``. ``Gx`` is the computed value at the floating-point node
    (zero up to rounding). Close to the node a Taylor polynomial is used; at
    moderate distance ``Gx`` is subtracted so that the rounding offset of
    the node is not amplified.
    """
    near = np.abs(h) < _NEAR / scale
    mid = np.abs(h) < _MID / scale
    hs = np.where(near, 1.0, h)
    v = np.where(mid, (G - Gx) / hs, G / hs)
    v = np.where(near, g[0] + g[1] * h / 2 + g[2] * h * h / 6, v)
    d = np.where(near, g[1] / 2 + g[2] * h / 3, (G1 - v) / hs)
    return v, d


def _check_node(space, fam, x):
    if abs(x.imag) > 0:
        raise UnknownNode(f"{fam} needs a real node, got {x}")
    c = eval_companions(space, x.real)
    r, d = (c.b, c.b1) if fam in _AT_T else (c.a, c.a1)
    if abs(r) > _NODE_TOL * max(1.0, abs(d)):
        kind = "B_alpha" if fam in _AT_T else "A_alpha"
        raise UnknownNode(f"{x.real!r} is not a zero of {kind} ({fam})")
    return x.real


def _term(space: SpaceDescriptor, term: RecipeTerm, z):
    fam = term.family
    if fam in ("KernelSection", "KernelSectionE"):
        w = complex(term.at)
        if fam == "KernelSection":
            return eval_K2(space, w, z).value, eval_K2_dz(space, w, z)
        return eval_K(space, w, z).value, eval_K_dz(space, w, z)
    if fam not in FAMILIES:
        raise UnknownNode(f"unknown family {fam!r}")
    x = _check_node(space, fam, complex(term.at))
    if fam == "P":
        return eval_P(space, x, z), eval_P_dz(space, x, z)
    cz = eval_companions(space, z)
    cx = eval_companions(space, x)
    A, A1, B, B1 = cz.a, cz.a1, cz.b, cz.b1
    a, a1, a2, a3 = cx.a.real, cx.a1.real, cx.a2.real, cx.a3.real
    b, b1, b2, b3 = cx.b.real, cx.b1.real, cx.b2.real, cx.b3.real
    h = z - x
    sc = max(1.0, space.exponential_type / np.pi)
    if fam == "BoverT":
        return _over_linear(B, B1, (b1, b2, b3), h, b, sc)
    if fam == "AoverS":
        return _over_linear(A, A1, (a1, a2, a3), h, a, sc)
    if fam == "Q":
        return _over_linear(A * A, 2 * A * A1,
                            (2 * a * a1, 2 * a1 * a1 + 2 * a * a2,
                             6 * a1 * a2 + 2 * a * a3), h, a * a, sc)
    G, G1 = A * B, A1 * B + A * B1
    g = (a1 * b + a * b1,
         a2 * b + 2 * a1 * b1 + a * b2,
         a3 * b + 3 * a2 * b1 + 3 * a1 * b2 + a * b3)
    return _over_linear(G, G1, g, h, a * b, sc)


@dataclass(frozen=True)
class GeneratedFunction:
    """A finite linear combination of family members.

    ``member_of`` is ``"E"`` or ``"E2"``: the space the function is known
    to lie in. Calling the object returns values; ``derivative`` returns
    first derivatives.
    """

    space: SpaceDescriptor
    recipe: tuple
    seed: int | None = None
    member_of: str = field(init=False)

    def __post_init__(self):
        if not self.recipe:
            raise ValueError("recipe must be nonempty")
        fams = {t.family for t in self.recipe}
        bad = fams - set(FAMILIES)
        if bad:
            raise UnknownNode(f"unknown family {sorted(bad)[0]!r}")
        if fams <= set(E2_FAMILIES):
            m = "E2"
        elif fams <= set(E_FAMILIES):
            m = "E"
        else:
            raise ValueError("recipe mixes H(E) and H(E^2) families")
        object.__setattr__(self, "member_of", m)
        # validate nodes eagerly
        for t in self.recipe:
            if t.family not in ("KernelSection", "KernelSectionE"):
                _check_node(self.space, t.family, complex(t.at))

    def value_and_derivative(self, z):
        scalar = np.ndim(z) == 0
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        v = np.zeros(zz.shape, dtype=complex)
        d = np.zeros(zz.shape, dtype=complex)
        for t in self.recipe:
            tv, td = _term(self.space, t, zz)
            v += t.coefficient * tv
            d += t.coefficient * td
        if scalar:
            return complex(v[0]), complex(d[0])
        return v, d

    def __call__(self, z):
        return self.value_and_derivative(z)[0]

    def derivative(self, z):
        return self.value_and_derivative(z)[1]

    def to_json(self) -> dict:
        return {"space": self.space.to_json(),
                "recipe": [t.to_json() for t in self.recipe],
                "seed": self.seed}

    @classmethod
    def from_json(cls, d: dict) -> "GeneratedFunction":
        return cls(SpaceDescriptor.from_json(d["space"]),
                   tuple(RecipeTerm.from_json(t) for t in d["recipe"]),
                   d.get("seed"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def make_function(space: SpaceDescriptor, recipe, seed: int | None = None) -> GeneratedFunction:
    """Build a :class:`GeneratedFunction` from RecipeTerms or their dicts.

    Raises
    ------
    UnknownNode
        If a node-attached term does not sit on a zero of the required
        companion function.
    """
    terms = tuple(t if isinstance(t, RecipeTerm) else RecipeTerm.from_json(t)
                  for t in recipe)
    return GeneratedFunction(space, terms, seed)


def node_pools(space: SpaceDescriptor, lo: float, hi: float):
    """``(t_nodes, s_nodes)``: zeros of ``B_alpha`` and of ``A_alpha`` in
    ``[lo, hi]``."""
    t = find_nodes(space, lo, hi).t
    s = find_nodes(space.rotated(-np.pi / 2), lo, hi).t
    return t, s


def random_recipe(space: SpaceDescriptor, n_terms: int, seed: int,
                  families=("ABoverT", "ABoverS"), span=(-10.0, 10.0),
                  kernel_radius: float = 3.0) -> GeneratedFunction:
    """Seeded random combination of ``n_terms`` family members.

    Node-attached terms draw nodes from ``span``; kernel sections draw
    ``w`` from the disk of radius ``kernel_radius``. Coefficients are
    standard complex normal.
    """
    rng = np.random.default_rng(seed)
    t_pool, s_pool = node_pools(space, *span)
    terms = []
    for _ in range(n_terms):
        fam = families[int(rng.integers(len(families)))]
        if fam in _AT_T:
            at = float(t_pool[int(rng.integers(t_pool.size))])
        elif fam in _AT_S:
            at = float(s_pool[int(rng.integers(s_pool.size))])
        else:
            r = kernel_radius * np.sqrt(rng.random())
            at = complex(r * np.exp(2j * np.pi * rng.random()))
        c = complex(rng.standard_normal(), rng.standard_normal())
        terms.append(RecipeTerm(fam, at, c))
    return GeneratedFunction(space, tuple(terms), seed)


def sample_on(fn, nodes: NodeSet) -> SampleSet:
    """Values and derivatives of ``fn`` at every node of ``nodes``.

    ``fn`` is a :class:`GeneratedFunction` or any object with
    ``value_and_derivative``.
    """
    t = nodes.t
    if t.size == 0:
        return SampleSet.from_samples(nodes, [])
    v, d = fn.value_and_derivative(t)
    return SampleSet.from_arrays(nodes, t, v, d)
