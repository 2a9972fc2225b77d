"""Truncated interpolation series with derivative samples.

For a node set ``T(alpha)`` (zeros of ``B_alpha``) and samples ``F(t)``,
``F'(t)`` the engine evaluates::

    B_alpha(z)^2 sum_t [ F(t) / (B'(t)^2 (z-t)^2)
                         + (F'(t) B'(t) - F(t) B''(t)) / (B'(t)^3 (z-t)) ]

over exactly the supplied samples. The Bessel forms replace the ``B''``
term by the explicit ``(2 nu + 1) F(t) / t`` correction.

Every form is a series ``W(z)^2 sum [c2 / (z-t)^2 + c1 / (z-t)]``; the
terms are summed per evaluation point in ascending ``|z - t|`` with
Neumaier compensation. Within ``NEAR`` of a node the node's own term is
replaced by its second-order Taylor polynomial, which stays accurate where
``W(z)^2 / (z-t)^2`` would cancel catastrophically. Out to ``MID`` the own
term is formed from ``W(z) - W(t)`` so that the few-ulp offset of a
computed node does not get amplified by ``1/(z-t)``. ``NEAR = 1e-4`` is
where the Taylor truncation error (order ``h^3``) meets the rounding
amplification (order ``eps/h``) of the direct form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySamples, NodeMismatch
from .nodes import NodeSet
from .numerics import neumaier_sum
from .space import SpaceDescriptor, eval_companions

# Taylor radius and subtraction radius around each node, for exponential
# type up to pi; both shrink in proportion for larger types
NEAR = 1e-4
MID = 1e-2
_CHUNK = 256


@dataclass(frozen=True)
class SampleSet:
    """Values ``f`` and derivatives ``f1`` at nodes ``t`` of ``node_set``."""

    node_set: NodeSet
    t: np.ndarray
    f: np.ndarray
    f1: np.ndarray
    index: np.ndarray  # position of each sample in node_set

    @classmethod
    def from_arrays(cls, node_set: NodeSet, t, f, f1) -> "SampleSet":
        t = np.atleast_1d(np.asarray(t, dtype=float))
        f = np.atleast_1d(np.asarray(f, dtype=complex))
        f1 = np.atleast_1d(np.asarray(f1, dtype=complex))
        if not (t.shape == f.shape == f1.shape):
            raise NodeMismatch("t, f and f1 must have equal lengths")
        idx = np.array([node_set.index_of(x) for x in t], dtype=int)
        if np.any(idx < 0):
            bad = t[idx < 0][0]
            raise NodeMismatch(f"sample point {bad!r} is not a node of the set")
        if np.unique(idx).size != idx.size:
            raise NodeMismatch("duplicate nodes in sample set")
        order = np.argsort(t, kind="stable")
        return cls(node_set, t[order], f[order], f1[order], idx[order])

    @classmethod
    def from_samples(cls, node_set: NodeSet, samples) -> "SampleSet":
        samples = list(samples)
        if not samples:
            return cls(node_set, np.zeros(0), np.zeros(0, complex),
                       np.zeros(0, complex), np.zeros(0, int))
        t, f, f1 = zip(*samples)
        return cls.from_arrays(node_set, t, f, f1)

    def __len__(self):
        return int(self.t.size)

    @property
    def nodes(self):
        return [self.node_set.nodes[i] for i in self.index]

    def to_json(self) -> dict:
        return {
            "node_set": self.node_set.to_json(),
            "samples": [[float(t), [f.real, f.imag], [d.real, d.imag]]
                        for t, f, d in zip(self.t, self.f, self.f1)],
        }

    @classmethod
    def from_json(cls, d: dict) -> "SampleSet":
        ns = NodeSet.from_json(d["node_set"])
        rows = [(t, complex(*f), complex(*d1)) for t, f, d1 in d["samples"]]
        return cls.from_samples(ns, rows)


@dataclass
class EvalResult:
    value: complex | np.ndarray
    tail_estimate: float | np.ndarray
    terms_used: int


@dataclass(frozen=True)
class _Series:
    t: np.ndarray
    c2: np.ndarray
    c1: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    mult: object  # callable z -> (W(z), W'(z))
    type_scale: float = 1.0  # max(1, type / pi)


def _series_eval(series: _Series, z, derivative: bool = False):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    shape = z.shape
    z = z.ravel()
    W, W1z = series.mult(z)
    t, c2, c1 = series.t, series.c2, series.c1
    w1, w2, w3 = series.w1, series.w2, series.w3
    k2 = w2 * w2 / 4 + w1 * w3 / 3
    # floating value of W at its own computed zeros (a few ulps from 0)
    Wt = series.mult(t.astype(complex))[0]
    val = np.empty(z.size, dtype=complex)
    der = np.empty(z.size, dtype=complex) if derivative else None
    r_near = NEAR / series.type_scale
    r_mid = MID / series.type_scale
    for lo in range(0, z.size, _CHUNK):
        zz = z[lo:lo + _CHUNK]
        Wc = W[lo:lo + _CHUNK][:, None]
        W1c = W1z[lo:lo + _CHUNK][:, None]
        h = zz[:, None] - t[None, :]
        ah = np.abs(h)
        near = ah < r_near
        mid = ~near & (ah < r_mid)
        far = ~(near | mid)
        hs = np.where(far, h, 1.0)
        terms = np.where(far, c2 / hs ** 2 + c1 / hs, 0.0)
        order = np.argsort(ah, axis=1, kind="stable")
        s = neumaier_sum(np.take_along_axis(terms, order, axis=1), axis=1)
        # near: Taylor polynomial of the whole term
        hn = np.where(near, h, 0.0)
        own = np.where(near, c2 * w1 * w1 + (c2 * w1 * w2 + c1 * w1 * w1) * hn
                       + (c2 * k2 + c1 * w1 * w2) * hn * hn, 0.0)
        # mid: W(z) - W(t) vanishes exactly at t, so the quotient does not
        # inherit the node's rounding offset
        hm = np.where(mid, h, 1.0)
        Wd = np.where(mid, Wc - Wt[None, :], 0.0)
        q = Wd / hm
        own = own + np.where(mid, c2 * q * q + c1 * Wd * q, 0.0)
        Wv = Wc[:, 0]
        val[lo:lo + _CHUNK] = Wv * Wv * s + own.sum(axis=1)
        if derivative:
            dterms = np.where(far, -2 * c2 / hs ** 3 - c1 / hs ** 2, 0.0)
            ds = neumaier_sum(np.take_along_axis(dterms, order, axis=1), axis=1)
            down = np.where(near, (c2 * w1 * w2 + c1 * w1 * w1)
                            + 2 * (c2 * k2 + c1 * w1 * w2) * hn, 0.0)
            dq = (W1c - q) / hm
            down = down + np.where(mid, 2 * c2 * q * dq + c1 * (W1c * q + Wd * dq), 0.0)
            der[lo:lo + _CHUNK] = (2 * Wv * W1c[:, 0] * s + Wv * Wv * ds
                                   + down.sum(axis=1))
    val = val.reshape(shape)
    if derivative:
        return val, der.reshape(shape)
    return val


def _tail_estimate(series: _Series, z):
    """Heuristic size of the excluded terms.

    Beyond the window the nodes are modelled as continuing with the mean
    spacing and the term coefficients as decaying like ``1/|t|`` from their
    edge values. Reported, never used to certify an error.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    t = series.t
    n = t.size
    gap = (t[-1] - t[0]) / (n - 1) if n > 1 else 1.0
    W = series.mult(z.ravel())[0].reshape(z.shape)
    k = min(3, n)
    total = np.zeros(z.shape)
    for sl, edge in ((slice(0, k), t[0] - gap), (slice(n - k, n), t[-1] + gap)):
        cf = np.max(np.abs(series.c2[sl]))
        cd = np.max(np.abs(series.c1[sl]))
        d = np.maximum(np.abs(z - edge), gap)
        total += cf / (gap * d) + cd * max(abs(edge), gap) / (gap * d)
    return np.abs(W) ** 2 * total


def _check_space(space: SpaceDescriptor, samples: SampleSet):
    if len(samples) == 0:
        raise EmptySamples("no samples supplied")
    if samples.node_set.space != space:
        raise NodeMismatch("samples belong to a different space/angle")


def _general_series(space: SpaceDescriptor, samples: SampleSet) -> _Series:
    nodes = samples.nodes
    b1 = np.array([n.b1 for n in nodes])
    b2 = np.array([n.b2 for n in nodes])
    b3 = np.array([n.b3 for n in nodes])
    f, d = samples.f, samples.f1
    c2 = f / b1 ** 2
    c1 = (d * b1 - f * b2) / b1 ** 3

    def mult(z):
        cv = eval_companions(space, z)
        return cv.b, cv.b1

    return _Series(samples.t, c2, c1, b1, b2, b3, mult,
                   max(1.0, space.exponential_type / np.pi))


def _result(series, z, scalar):
    v = _series_eval(series, z)
    tail = _tail_estimate(series, z)
    if scalar:
        return EvalResult(complex(v.ravel()[0]), float(tail.ravel()[0]), len(series.t))
    return EvalResult(v, tail, len(series.t))


def interpolate(space: SpaceDescriptor, samples: SampleSet, z) -> EvalResult:
    """Partial sum of the interpolation series over the given samples.

    Raises
    ------
    EmptySamples
        If ``samples`` is empty.
    NodeMismatch
        If the samples were taken on a node set of a different space.
    """
    _check_space(space, samples)
    return _result(_general_series(space, samples), z, np.ndim(z) == 0)


def interpolate_derivative(space: SpaceDescriptor, samples: SampleSet, z):
    """Derivative of the partial sum, differentiated term by term."""
    _check_space(space, samples)
    _, d = _series_eval(_general_series(space, samples), z, derivative=True)
    return complex(d.ravel()[0]) if np.ndim(z) == 0 else d


def _bessel_series(nu: float, samples: SampleSet, use_a: bool) -> _Series:
    base = SpaceDescriptor.bessel(nu)
    t = samples.t
    cv = eval_companions(base, t)
    if use_a:
        w1, w2, w3 = cv.a1.real, cv.a2.real, cv.a3.real
    else:
        w1, w2, w3 = cv.b1.real, cv.b2.real, cv.b3.real
    c = 2.0 * nu + 1.0
    f, d = samples.f, samples.f1
    nz = t != 0.0
    corr = np.zeros_like(f)
    corr[nz] = c * f[nz] / t[nz]
    c2 = f / w1 ** 2
    c1 = (d + corr) / w1 ** 2

    def mult(z):
        cz = eval_companions(base, z)
        return (cz.a, cz.a1) if use_a else (cz.b, cz.b1)

    return _Series(t, c2, c1, w1, w2, w3, mult)


def _check_bessel(nu, samples, alpha):
    if len(samples) == 0:
        raise EmptySamples("no samples supplied")
    sp = samples.node_set.space
    if not (sp.is_bessel and sp.nu == float(nu) and abs(sp.alpha - alpha) < 1e-12):
        raise NodeMismatch("samples must sit on the matching Bessel node set")


def interpolate_bessel_A(nu: float, samples: SampleSet, z) -> EvalResult:
    """Bessel form at the zeros of ``A_nu``::

        F(z) = A(z)^2 { sum F(s)/(A'(s)^2 (z-s)^2) + F'(s)/(A'(s)^2 (z-s))
                        + (2nu+1) sum F(s)/(s A'(s)^2 (z-s)) }
    """
    _check_bessel(nu, samples, np.pi / 2)
    return _result(_bessel_series(nu, samples, True), z, np.ndim(z) == 0)


def interpolate_bessel_B(nu: float, samples: SampleSet, z) -> EvalResult:
    """Bessel form at the zeros of ``B_nu``; the node ``t = 0`` takes part in
    the main sum but not in the ``(2nu+1)`` correction."""
    _check_bessel(nu, samples, 0.0)
    return _result(_bessel_series(nu, samples, False), z, np.ndim(z) == 0)


class Interpolant:
    """Callable partial sum over a fixed sample set."""

    def __init__(self, space: SpaceDescriptor, samples: SampleSet):
        _check_space(space, samples)
        self.space = space
        self.samples = samples
        self._series = _general_series(space, samples)

    def __call__(self, z):
        v = _series_eval(self._series, z)
        return complex(v.ravel()[0]) if np.ndim(z) == 0 else v

    def derivative(self, z):
        _, d = _series_eval(self._series, z, derivative=True)
        return complex(d.ravel()[0]) if np.ndim(z) == 0 else d

    def evaluate(self, z) -> EvalResult:
        return _result(self._series, z, np.ndim(z) == 0)
