"""Verification of candidate one-sided approximants of a radial profile.

A majorant ``M >= g`` (minorant ``L <= g``) of exponential type twice that
of ``E`` is optimal for the measure ``dmu_E`` when it interpolates ``g``
with matching derivative at the zeros of ``B`` (of ``A`` for minorants).
The verifier checks the sign condition on a grid, both interpolation
conditions on the node family, and evaluates the weighted error::

    int_R (M(t) - g(|t|)) / |E(t)|^2 dt = 2 int_0^inf ...

together with the node sum ``sum (M(t) - g(|t|)) / K(t, t)`` over the same
family; the two agree whenever ``M - g`` is itself of the right type.

The dimension only enters ``mu_E`` through a constant that cancels in the
radial reduction, so profiles are handled as even functions on the line.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (GridTooCoarse, NodeWindowEmpty, PanelBudgetExceeded,
                     PreconditionFailed, QuadratureFailure)
from .interp import Interpolant, SampleSet
from .nodes import find_nodes
from .numerics import QuadratureSpec, extrapolated_node_sum, integrate_window
from .space import SpaceDescriptor, abs_E_squared

MAJORANT = "majorant"
MINORANT = "minorant"
SIGN_SLACK = 1e-9


@dataclass(frozen=True)
class Profile:
    """Radial profile ``f(r)`` with derivative ``df(r)``; both vectorised."""

    f: object
    df: object

    def value_and_derivative(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.f(x)), np.asarray(self.df(x))


def _as_profile(c) -> Profile:
    if isinstance(c, Profile):
        return c
    if hasattr(c, "value_and_derivative"):
        return Profile(lambda x: np.real(c.value_and_derivative(x)[0]),
                       lambda x: np.real(c.value_and_derivative(x)[1]))
    f, df = c
    return Profile(f, df)


@dataclass(frozen=True)
class ExtremalProblem:
    dimension: int
    g: object        # g(r) for r >= 0 (r > 0 for minorants)
    g_prime: object
    side: str
    space: SpaceDescriptor
    punctured_radius: float = 1e-3

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.side not in (MAJORANT, MINORANT):
            raise ValueError(f"side must be {MAJORANT!r} or {MINORANT!r}")

    @property
    def node_space(self) -> SpaceDescriptor:
        """Majorants interpolate at zeros of ``B``, minorants at zeros of
        ``A`` (the nodes of angle ``pi/2``, where ``B_alpha = -A``)."""
        base = self.space.with_alpha(0.0)
        return base if self.side == MAJORANT else base.with_alpha(math.pi / 2)

    @property
    def sign(self) -> float:
        return 1.0 if self.side == MAJORANT else -1.0


@dataclass
class VerificationReport:
    sign_ok: bool
    interp_ok: bool
    derivative_interp_ok: bool
    weighted_error: float
    node_sum_error: float
    max_sign_violation: float
    worst_node_residual: float
    worst_derivative_residual: float = 0.0
    weighted_error_tail: float = 0.0
    node_count: int = 0
    dimension: int = 1
    unchecked_hypotheses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.sign_ok and self.interp_ok and self.derivative_interp_ok

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def parse_grid(grid) -> tuple[float, float, int]:
    """``"a:b:n"`` or ``(a, b, n)``."""
    if isinstance(grid, str):
        a, b, n = grid.split(":")
        return float(a), float(b), int(n)
    a, b, n = grid
    return float(a), float(b), int(n)


def _family_nodes(problem: ExtremalProblem, window: float):
    ns = find_nodes(problem.node_space, 0.0, window)
    if len(ns) == 0:
        raise NodeWindowEmpty(f"no {problem.side} nodes in [0, {window}]")
    return ns


def _interp_checks(problem, cand: Profile, ns, tol_abs, tol_rel):
    t = ns.t
    cv, cd = cand.value_and_derivative(t)
    g = np.asarray(problem.g(t), dtype=float)
    gd = np.asarray(problem.g_prime(t), dtype=float)
    res = np.abs(cv - g)
    lim = np.maximum(tol_abs, tol_rel * (1 + np.abs(g)))
    # r'(t) = sgn(t) g'(|t|) at nonzero nodes, r'(0) = 0
    target = np.where(t == 0.0, 0.0, gd)
    dres = np.abs(cd - target)
    dlim = np.maximum(tol_abs, tol_rel * (1 + np.abs(target)))
    return (bool(np.all(res <= lim)), float(res.max()),
            bool(np.all(dres <= dlim)), float(dres.max()))


def _sign_check(problem, cand: Profile, grid, gap, max_refine):
    a, b, n = parse_grid(grid)
    x = np.linspace(a, b, n)
    step = (b - a) / max(n - 1, 1)
    if step > gap / 8:
        raise GridTooCoarse(f"grid step {step:.3g} does not resolve node gap {gap:.3g}")
    x = x[np.abs(x) >= problem.punctured_radius]
    if x.size == 0:
        return True, 0.0

    def diff(r):
        r = np.asarray(r, dtype=float)
        return problem.sign * (cand.value_and_derivative(r)[0] - np.asarray(problem.g(r)))

    d = diff(x)
    worst = float(-d.min())
    # refine around every discrete local minimum that comes close to zero
    mid, left, right = d[1:-1], d[:-2], d[2:]
    interior = np.where((mid <= left) & (mid <= right)
                        & ((mid < left) | (mid < right)))[0] + 1
    cand_idx = interior[d[interior] < 1e-6 * (1 + np.abs(d).max())]
    if cand_idx.size > max_refine:
        raise GridTooCoarse(f"{cand_idx.size} contact points exceed the refinement budget")
    for i in cand_idx:
        res = minimize_scalar(lambda r: float(diff(r)), bounds=(x[i - 1], x[i + 1]),
                              method="bounded", options={"xatol": 1e-12})
        worst = max(worst, -float(res.fun))
    worst = max(worst, 0.0)
    return worst <= SIGN_SLACK, worst


def verify_candidate(problem: ExtremalProblem, candidate, grid="0:50:20000",
                     window: float = 200.0, tol_abs: float = 1e-7,
                     tol_rel: float = 1e-7, max_refine: int = 100000,
                     spec: QuadratureSpec | None = None) -> VerificationReport:
    """Check sign, interpolation and derivative conditions and evaluate the
    weighted and node-sum errors.

    Parameters
    ----------
    candidate
        :class:`Profile`, ``(f, df)`` pair, or any object with
        ``value_and_derivative`` (real part taken).
    grid
        ``"a:b:n"`` sign-check grid on the radius.
    window
        Half-width for nodes, quadrature and node sums.

    Raises
    ------
    GridTooCoarse
        If the grid cannot resolve the node spacing or the refinement
        budget is exceeded.
    NodeWindowEmpty
        If the designated node family has no point in the window.
    """
    cand = _as_profile(candidate)
    ns = _family_nodes(problem, window)
    interp_ok, worst_res, dinterp_ok, worst_dres = _interp_checks(
        problem, cand, ns, tol_abs, tol_rel)
    gap = float(np.min(np.diff(ns.t))) if len(ns) > 1 else float(window)
    sign_ok, violation = _sign_check(problem, cand, grid, gap, max_refine)

    space = problem.space.with_alpha(0.0)
    spec = spec or QuadratureSpec(tail_model="algebraic", tail_exponent=2.0)

    def integrand(r):
        r = np.asarray(r, dtype=float)
        e = problem.sign * (cand.value_and_derivative(r)[0] - np.asarray(problem.g(r)))
        return 2.0 * e / abs_E_squared(space, r)

    try:
        quad = integrate_window(integrand, window, spec, one_sided=True)
    except PanelBudgetExceeded as exc:
        raise QuadratureFailure(str(exc)) from exc

    # node sum over the whole symmetric family, K(t,t) = B_a'(t) A_a(t) / pi
    t = ns.t
    k = np.array([n.b1 * n.a for n in ns]) / math.pi
    e = problem.sign * (cand.value_and_derivative(t)[0] - np.asarray(problem.g(t)))
    mult = np.where(t == 0.0, 1.0, 2.0)
    terms = mult * e / k
    node_sum, _ = extrapolated_node_sum(terms, t, 2.0)
    return VerificationReport(
        sign_ok=sign_ok, interp_ok=interp_ok, derivative_interp_ok=dinterp_ok,
        weighted_error=float(quad.value), node_sum_error=float(np.real(node_sum)),
        max_sign_violation=violation, worst_node_residual=worst_res,
        worst_derivative_residual=worst_dres,
        weighted_error_tail=float(quad.tail + quad.error), node_count=2 * len(ns) - int(t[0] == 0),
        dimension=problem.dimension,
        unchecked_hypotheses=[f"the opposite class ({'minorants' if problem.side == MAJORANT else 'majorants'}) is nonempty",
                              "the candidate has exponential type at most twice that of E",
                              "candidate - g is integrable against mu_E"],
    )


def uniqueness_gap(problem: ExtremalProblem, candidate1, candidate2,
                   window: float = 200.0, grid="0:10:201",
                   tol_abs: float = 1e-7, tol_rel: float = 1e-7) -> float:
    """Numerical witness that two interpolating candidates coincide.

    The difference ``f = c1 - c2`` is sampled (value and derivative) on the
    node family over ``[-window, window]`` and fed through the
    interpolation series; the maximum of the reconstruction over ``grid``
    is returned. For two genuine solutions all samples vanish.

    Raises
    ------
    PreconditionFailed
        If either candidate fails an interpolation condition.
    """
    c1, c2 = _as_profile(candidate1), _as_profile(candidate2)
    ns_half = _family_nodes(problem, window)
    for i, c in enumerate((c1, c2), 1):
        ok, _, dok, _ = _interp_checks(problem, c, ns_half, tol_abs, tol_rel)
        if not (ok and dok):
            raise PreconditionFailed(f"candidate {i} violates the interpolation conditions")
    ns = find_nodes(problem.node_space, -window, window)
    t = ns.t
    v1, d1 = c1.value_and_derivative(np.abs(t))
    v2, d2 = c2.value_and_derivative(np.abs(t))
    sgn = np.sign(t)
    f = v1 - v2
    df = sgn * (d1 - d2)  # even extension of a radial profile
    rec = Interpolant(problem.node_space, SampleSet.from_arrays(ns, t, f, df))
    a, b, n = parse_grid(grid)
    x = np.linspace(a, b, n)
    return float(np.max(np.abs(rec(x))))
