"""Interpolation nodes: the real zeros of ``B_alpha / E`` in a window.

Both families have ``phi' > 0``, so the phase is a monotone map and the
node count in a window is a winding count. Nodes are bracketed by the
crossings of the unwrapped phase through the levels ``alpha + k pi`` and
refined as simple zeros of ``B_alpha`` with analytic derivatives.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .numerics import refine_roots
from .space import SpaceDescriptor, eval_companions, phase_derivative, unwrapped_phase


@dataclass(frozen=True)
class Node:
    t: float
    b1: float          # B_alpha'(t)
    b2: float          # B_alpha''(t)
    a: float           # A_alpha(t)
    phase_slope: float  # phi'(t) = b1 / a
    k2_diag: float     # K_2(t, t)
    b3: float = 0.0    # B_alpha'''(t), used by near-node Taylor forms
    is_origin: bool = False


@dataclass(frozen=True)
class NodeSet:
    space: SpaceDescriptor
    window: tuple
    nodes: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    @property
    def t(self) -> np.ndarray:
        return np.array([n.t for n in self.nodes], dtype=float)

    def index_of(self, t: float, tol: float = 1e-9) -> int:
        """Index of the node within ``tol`` of ``t``, or -1."""
        ts = self.t
        if ts.size == 0:
            return -1
        i = int(np.searchsorted(ts, t))
        best = -1
        for j in (i - 1, i):
            if 0 <= j < ts.size and abs(ts[j] - t) <= tol * max(1.0, abs(t)):
                best = j
        return best

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "window": list(self.window),
            "nodes": [asdict(n) for n in self.nodes],
        }

    @classmethod
    def from_json(cls, d: dict) -> "NodeSet":
        space = SpaceDescriptor.from_json(d["space"])
        nodes = tuple(Node(**n) for n in d["nodes"])
        return cls(space, tuple(d["window"]), nodes)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _grid_step(space: SpaceDescriptor, t_min: float, t_max: float) -> float:
    coarse = np.linspace(t_min, t_max, max(2, int((t_max - t_min) / 0.05) + 2))
    peak = float(np.max(phase_derivative(space, coarse)))
    # each grid step advances the phase by well under pi/2
    return min(0.25, math.pi / (8.0 * 1.25 * peak))


def _make_nodes(space: SpaceDescriptor, roots: np.ndarray) -> tuple:
    if roots.size == 0:
        return ()
    cv = eval_companions(space, roots)
    a = cv.a.real
    b1 = cv.b1.real
    out = []
    for i, t in enumerate(roots):
        out.append(Node(
            t=float(t), b1=float(b1[i]), b2=float(cv.b2[i].real),
            a=float(a[i]), phase_slope=float(b1[i] / a[i]),
            k2_diag=float(2.0 * a[i] ** 3 * b1[i] / math.pi),
            b3=float(cv.b3[i].real), is_origin=bool(t == 0.0),
        ))
    return tuple(out)


def find_nodes(space: SpaceDescriptor, t_min: float, t_max: float) -> NodeSet:
    """All nodes of ``space`` (zeros of ``B_alpha``) in ``[t_min, t_max]``.

    Completeness: the number of nodes equals the number of levels
    ``alpha + k pi`` crossed by the unwrapped phase between the window ends,
    and each crossing is bracketed and refined separately.

    Raises
    ------
    RadiusExceeded
        For Bessel spaces whose window leaves the certified radius.
    """
    t_min, t_max = float(t_min), float(t_max)
    if t_max < t_min:
        raise ValueError("t_max must be >= t_min")
    if t_max == t_min:
        grid = np.array([t_min, t_min])
    else:
        h = _grid_step(space, t_min, t_max)
        grid = np.linspace(t_min, t_max, int(math.ceil((t_max - t_min) / h)) + 1)
    phi = unwrapped_phase(space, grid)
    alpha = space.alpha
    k_lo = math.ceil((phi[0] - alpha) / math.pi - 1e-12)
    k_hi = math.floor((phi[-1] - alpha) / math.pi + 1e-12)
    levels = alpha + math.pi * np.arange(k_lo, k_hi + 1)
    if levels.size == 0:
        return NodeSet(space, (t_min, t_max), ())

    def f(x):
        return eval_companions(space, np.asarray(x, dtype=float)).b.real

    def df(x):
        return eval_companions(space, np.asarray(x, dtype=float)).b1.real

    idx = np.clip(np.searchsorted(phi, levels), 1, grid.size - 1)
    lo = grid[idx - 1]
    hi = grid[idx]
    # widen brackets whose endpoint values do not straddle zero (a level
    # sitting on a grid point, or B_alpha rounding at a window edge)
    flo, fhi = f(lo), f(hi)
    stuck = (np.sign(flo) == np.sign(fhi)) & (flo != 0) & (fhi != 0)
    if stuck.any():
        step = grid[1] - grid[0] if grid.size > 1 else 1e-3
        lo = np.where(stuck, lo - 0.5 * step, lo)
        hi = np.where(stuck, hi + 0.5 * step, hi)
    roots = refine_roots(f, df, lo, hi)
    if space.alpha == 0.0:
        # B is odd for both families, so the origin is an exact node
        roots = np.where(np.abs(roots) < 1e-12, 0.0, roots)
    roots = roots[(roots >= t_min - 1e-12) & (roots <= t_max + 1e-12)]
    roots = np.unique(roots)
    return NodeSet(space, (t_min, t_max), _make_nodes(space, roots))


def node_set_from_points(space: SpaceDescriptor, points) -> NodeSet:
    """Build a NodeSet from explicit node locations (no search)."""
    pts = np.sort(np.asarray(points, dtype=float))
    w = (float(pts[0]), float(pts[-1])) if pts.size else (0.0, 0.0)
    return NodeSet(space, w, _make_nodes(space, pts))


def k2_diagonal(node: Node, space: SpaceDescriptor) -> float:
    """``K_2(t, t) = 2 A_alpha(t)**3 B_alpha'(t) / pi`` at a node of ``space``."""
    cv = eval_companions(space, node.t)
    return 2.0 * cv.a.real ** 3 * cv.b1.real / math.pi


def node_count_from_phase(space: SpaceDescriptor, phi_lo: float,
                          phi_hi: float) -> int:
    """Number of levels ``alpha + k pi`` in ``[phi_lo, phi_hi]``."""
    a = space.alpha
    return max(0, math.floor((phi_hi - a) / math.pi + 1e-12)
               - math.ceil((phi_lo - a) / math.pi - 1e-12) + 1)
