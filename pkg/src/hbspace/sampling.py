"""Sampling with derivatives: frame ratios and reconstruction from data.

For ``F`` in ``H(E^2)`` the node energy ``sum |F(t)|^2 + |F'(t)|^2`` is
compared with ``int |F|^2``. In the Paley-Wiener case this is the plain
``L^2`` norm; for Bessel spaces both sides carry the weight ``|E|^-4`` so
that the comparison stays inside ``H(E^2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import LengthMismatch, PanelBudgetExceeded, QuadratureFailure, TailTooLarge, ZeroFunction
from .interp import Interpolant, SampleSet
from .nodes import NodeSet, find_nodes, node_set_from_points
from .numerics import QuadratureSpec, extrapolated_node_sum, integrate_window
from .space import PW, SpaceDescriptor, abs_E_squared


@dataclass
class FrameReport:
    energy_integral: float
    node_energy: float
    ratio: float
    window: tuple
    tail: float = 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


def frame_ratio(space: SpaceDescriptor, F, window: float = 200.0,
                tail_fraction: float = 0.01,
                spec: QuadratureSpec | None = None) -> FrameReport:
    """Node energy over ``int |F|^2`` on the nodes of ``space`` in
    ``[-window, window]``.

    ``F`` needs ``value_and_derivative`` (see :mod:`hbspace.testgen`). Both
    energies are extrapolated past the window; each correction must stay
    below ``tail_fraction`` of the quantity it corrects.

    Raises
    ------
    ZeroFunction
        If the energy integral vanishes.
    TailTooLarge
        If the window is too small for the tail model.
    """
    spec = spec or QuadratureSpec(tail_model="algebraic", tail_exponent=2.0)

    def weight(x):
        return 1.0 if space.family == PW else 1.0 / abs_E_squared(space, x) ** 2

    def integrand(x):
        v = F.value_and_derivative(x)[0]
        return np.abs(v) ** 2 * weight(x)

    try:
        quad = integrate_window(integrand, window, spec)
    except PanelBudgetExceeded as exc:
        raise QuadratureFailure(str(exc)) from exc
    if quad.value <= 0 or not np.isfinite(quad.value):
        raise ZeroFunction("energy integral is zero")
    t = find_nodes(space, -window, window).t
    v, d = F.value_and_derivative(t)
    terms = (np.abs(v) ** 2 + np.abs(d) ** 2) * weight(t)
    node, node_tail = extrapolated_node_sum(terms, t, 2.0)
    node = float(np.real(node))
    tail = quad.tail + node_tail
    # each extrapolation is judged against the quantity it corrects
    if quad.tail > tail_fraction * quad.value or node_tail > tail_fraction * node:
        raise TailTooLarge(f"tails {quad.tail:.3g} (integral {quad.value:.3g}) and "
                           f"{node_tail:.3g} (node energy {node:.3g}) exceed the "
                           f"fraction {tail_fraction:g}; enlarge the window")
    return FrameReport(float(quad.value), node, node / quad.value,
                       (-float(window), float(window)), float(tail))


def reconstruct(space: SpaceDescriptor, nodes: NodeSet, p, q) -> Interpolant:
    """The interpolant with ``F(t_n) = p_n`` and ``F'(t_n) = q_n``.

    ``p`` and ``q`` are indexed like ``nodes``. The returned handle is
    callable and has ``derivative`` and ``evaluate`` methods.

    Raises
    ------
    LengthMismatch
        If ``p`` or ``q`` does not match the node count.
    """
    p = np.asarray(p, dtype=complex).ravel()
    q = np.asarray(q, dtype=complex).ravel()
    if p.size != len(nodes) or q.size != len(nodes):
        raise LengthMismatch(f"{len(nodes)} nodes but {p.size} values and "
                             f"{q.size} derivatives")
    samples = SampleSet.from_arrays(nodes, nodes.t, p, q)
    return Interpolant(space, samples)


def shifted_space(space: SpaceDescriptor, delta: float) -> SpaceDescriptor:
    """Paley-Wiener descriptor whose nodes are those of ``space`` moved by
    ``delta``: ``sin(tau z - alpha)`` vanishes at ``(alpha + k pi)/tau``, so
    the shift is the rotation ``alpha + tau delta``."""
    if space.family != PW:
        raise ValueError("translation covariance holds for Paley-Wiener spaces only")
    return space.rotated(space.tau * delta)


def shifted_nodes(space: SpaceDescriptor, nodes: NodeSet, delta: float) -> NodeSet:
    """``nodes`` translated by ``delta``, as nodes of :func:`shifted_space`."""
    return node_set_from_points(shifted_space(space, delta), nodes.t + delta)


def node_spacing_bound(space: SpaceDescriptor, window: float) -> float:
    """Separation floor ``pi / max phi'`` over the window."""
    from .space import phase_derivative

    x = np.linspace(-window, window, 4001)
    return math.pi / float(np.max(phase_derivative(space, x)))
