"""Numerical checks of partial-fraction, Parseval-type and measure identities.

Every check compares a closed-form side (``lhs``) with a truncated node sum
or integral (``rhs``). Truncations are taken at widths ``T`` and ``T/2``
and extrapolated with :func:`hbspace.numerics.richardson_tail`, using the
decay order of the summand; the size of that correction is reported as
``tail``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import bessel
from .errors import (PanelBudgetExceeded, QuadratureFailure, SeparationViolated,
                     SingularPoint)
from .kernels import quotient_third_derivative
from .nodes import find_nodes
from .numerics import (QuadratureSpec, compensated_sum, extrapolated_node_sum,
                       integrate_window)
from .space import SpaceDescriptor, abs_E_squared, eval_companions

PARTIAL_FRACTIONS = ("BA_form0", "BA_form1", "BA_form2", "AB_21", "AB_22", "AB_4")

# decay order of the summand in the node variable
_DECAY = {"BA_form0": 2, "BA_form1": 2, "BA_form2": 2,
          "AB_21": 3, "AB_22": 4, "AB_4": 4}
_DEFAULT_TOL = {2: 1e-4, 3: 1e-6, 4: 1e-8}
_SINGULAR = 1e-9


@dataclass
class IdentityReport:
    name: str
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    passed: bool
    tolerance: float
    tail: float = 0.0

    @classmethod
    def compare(cls, name, lhs, rhs, tolerance, tail=0.0) -> "IdentityReport":
        abs_err = float(abs(lhs - rhs))
        scale = abs(lhs)
        rel_err = abs_err / scale if scale > 0 else (0.0 if abs_err == 0 else math.inf)
        passed = abs_err <= tolerance or rel_err <= tolerance
        return cls(name, lhs, rhs, abs_err, rel_err, bool(passed), float(tolerance),
                   float(tail))

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("lhs", "rhs"):
            v = complex(d[k])
            d[k] = v.real if v.imag == 0 else [v.real, v.imag]
        return d


# ---------------------------------------------------------------------------
# Hilbert-type quadratic form


@dataclass(frozen=True)
class HilbertFormInput:
    xi: tuple
    a: tuple
    sigma: float


@dataclass(frozen=True)
class HilbertFormResult:
    form: float
    lower: float
    upper: float
    within: bool


def hilbert_form(inp: HilbertFormInput) -> HilbertFormResult:
    """``sum_{m != n} a_n conj(a_m) / (xi_n - xi_m)^2`` against its bounds
    ``[-pi^2/(6 sigma^2), pi^2/(3 sigma^2)] * sum |a_n|^2``.

    Raises
    ------
    SeparationViolated
        If two points are closer than ``sigma`` or the lengths differ.
    """
    xi = np.asarray(inp.xi, dtype=float)
    a = np.asarray(inp.a, dtype=complex)
    if xi.shape != a.shape:
        raise SeparationViolated("xi and a must have equal lengths")
    if not inp.sigma > 0:
        raise SeparationViolated("sigma must be positive")
    d = xi[:, None] - xi[None, :]
    off = ~np.eye(xi.size, dtype=bool)
    if off.any() and np.min(np.abs(d[off])) < inp.sigma * (1 - 1e-12):
        raise SeparationViolated("points closer than sigma")
    w = np.zeros_like(d)
    w[off] = 1.0 / d[off] ** 2
    form = float(np.real(a @ w @ np.conj(a)))
    norm = float(np.sum(np.abs(a) ** 2))
    lo = -math.pi ** 2 / (6 * inp.sigma ** 2) * norm
    hi = math.pi ** 2 / (3 * inp.sigma ** 2) * norm
    slack = 1e-12 * max(1.0, abs(hi))
    return HilbertFormResult(form, lo, hi, bool(lo - slack <= form <= hi + slack))


# ---------------------------------------------------------------------------
# partial fractions


def _nodes_ab(space, window):
    """Zeros of A_alpha (``s``) and B_alpha (``t``) in ``[-window, window]``
    with the companion values needed by the sums."""
    t_set = find_nodes(space, -window, window)
    s_set = find_nodes(space.rotated(-math.pi / 2), -window, window)
    s = s_set.t
    t = t_set.t
    cs = eval_companions(space, s)
    ct = eval_companions(space, t)
    return s, cs, t, ct


def _truncated(terms, x, window, decay):
    return extrapolated_node_sum(terms, x, decay)


def _check_regular(space, pts, which_zero, label):
    for p in pts:
        c = eval_companions(space, complex(p))
        v, d = (c.a, c.a1) if which_zero == "A" else (c.b, c.b1)
        if abs(v) <= _SINGULAR * max(1.0, abs(d)):
            raise SingularPoint(f"{label}: {p} sits on a zero of {which_zero}_alpha")


def _require_zero(space, p, which_zero, label):
    c = eval_companions(space, float(p))
    v, d = (c.a, c.a1) if which_zero == "A" else (c.b, c.b1)
    if abs(v) > 1e-8 * max(1.0, abs(d)):
        raise SingularPoint(f"{label}: {p} is not a zero of {which_zero}_alpha")
    return float(p)


def check_partial_fraction(space: SpaceDescriptor, which: str, args,
                           window: float = 300.0,
                           tolerance: float | None = None) -> IdentityReport:
    """Compare a partial-fraction expansion with its truncated node sum.

    ``A``, ``B`` below mean ``A_alpha``, ``B_alpha`` of ``space``; ``s_n``
    are the zeros of ``A`` and ``t_n`` those of ``B``.

    ======== ============== ===============================================
    which    args           identity
    ======== ============== ===============================================
    BA_form0 (z, w)         ``(B/A(z) - B/A(wb)) / (wb - z)
                            = sum B(s)/(A'(s)(z-s)(wb-s))``, ``wb = conj w``
    BA_form1 (z, s_j)       ``B/A(z)`` from the expansion anchored at ``s_j``
    BA_form2 (z, t_j)       ``B/A(z) = sum B(s)/A'(s) (1/(z-s) + 1/(s-t_j))``
    AB_21    (s_k, s_l)     ``A'(s_k)/(B(s_k)(s_k-s_l))
                            = sum A(t)/(B'(t)(s_k-t)^2(s_l-t))``
    AB_22    (s_k, s_l)     symmetric fourth-order variant
    AB_4     (s_k,)         ``-(A/B)'''(s_k)/6 = sum A(t)/(B'(t)(s_k-t)^4)``
    ======== ============== ===============================================

    Raises
    ------
    SingularPoint
        If an evaluation point sits on a pole, or an anchor is not a zero
        of the required companion.
    """
    if which not in PARTIAL_FRACTIONS:
        raise ValueError(f"unknown identity {which!r}")
    args = list(args)
    decay = _DECAY[which]
    tol = _DEFAULT_TOL[decay] if tolerance is None else tolerance
    if any(abs(complex(a)) > window for a in args):
        raise ValueError("window must cover the requested points")
    s, cs, t, ct = _nodes_ab(space, window)
    bs = cs.b.real
    a1s = cs.a1.real
    at = ct.a.real
    b1t = ct.b1.real

    def ba(z):
        c = eval_companions(space, complex(z))
        return c.b / c.a

    offset = 0.0

    if which == "BA_form0":
        z, w = complex(args[0]), complex(args[1])
        wb = w.conjugate()
        _check_regular(space, (z, wb), "A", which)
        if abs(z - wb) < _SINGULAR:
            raise SingularPoint("BA_form0 needs z != conj(w)")
        lhs = (ba(z) - ba(wb)) / (wb - z)
        x, terms = s, bs / a1s / ((z - s) * (wb - s))
    elif which == "BA_form1":
        z = complex(args[0])
        sj = _require_zero(space, args[1], "A", which)
        _check_regular(space, (z,), "A", which)
        cj = eval_companions(space, sj)
        offset = (cj.b1.real / cj.a1.real
                 - cj.b.real * cj.a2.real / (2 * cj.a1.real ** 2)
                 + cj.b.real / (cj.a1.real * (z - sj)))
        lhs = ba(z)
        keep = np.abs(s - sj) > 1e-9 * max(1.0, abs(sj))
        x = s[keep]
        terms = (bs / a1s)[keep] * (1 / (z - x) + 1 / (x - sj))
    elif which == "BA_form2":
        z = complex(args[0])
        tj = _require_zero(space, args[1], "B", which)
        _check_regular(space, (z,), "A", which)
        lhs = ba(z)
        x, terms = s, bs / a1s * (1 / (z - s) + 1 / (s - tj))
    else:
        sk = _require_zero(space, args[0], "A", which)
        ck = eval_companions(space, sk)
        rk = ck.a1.real / ck.b.real
        c = at / b1t
        x = t
        if which == "AB_4":
            lhs = -quotient_third_derivative(
                (ck.a.real, ck.a1.real, ck.a2.real, ck.a3.real),
                (ck.b.real, ck.b1.real, ck.b2.real, ck.b3.real)) / 6.0
            terms = c / (sk - t) ** 4
        else:
            sl = _require_zero(space, args[1], "A", which)
            if sl == sk:
                raise SingularPoint(f"{which} needs distinct anchors")
            cl = eval_companions(space, sl)
            rl = cl.a1.real / cl.b.real
            if which == "AB_21":
                lhs = rk / (sk - sl)
                terms = c / ((sk - t) ** 2 * (sl - t))
            else:
                lhs = -(rk + rl) / (sk - sl) ** 2
                terms = c / ((sk - t) ** 2 * (sl - t) ** 2)
    rhs, tail = _truncated(terms, x, window, decay)
    rhs = rhs + offset
    return IdentityReport.compare(which, complex(lhs), complex(rhs), tol, tail)


def summability_partial_sums(space: SpaceDescriptor, windows) -> list[float]:
    """Partial sums of ``sum |B(s)| / (|A'(s)| (1 + s^2))`` over growing
    windows."""
    out = []
    for w in windows:
        s_set = find_nodes(space.rotated(-math.pi / 2), -w, w)
        c = eval_companions(space, s_set.t)
        out.append(float(compensated_sum(
            np.abs(c.b.real) / (np.abs(c.a1.real) * (1 + s_set.t ** 2)))))
    return out


# ---------------------------------------------------------------------------
# Parseval and measure identities


def _values(F, x):
    v = F(x)
    return np.asarray(v, dtype=complex)


def _quad(fn, window, spec, one_sided=False):
    try:
        return integrate_window(fn, window, spec, one_sided=one_sided)
    except PanelBudgetExceeded as exc:
        raise QuadratureFailure(str(exc)) from exc


def parseval_node_sum(space: SpaceDescriptor, F, angle: float | None = None,
                      window: float = 300.0, kind: str = "E",
                      tolerance: float = 1e-4,
                      spec: QuadratureSpec | None = None) -> IdentityReport:
    """Norm identity: integral against node sum.

    ``kind="E"``: ``int |F/E|^2 = pi sum_t |F(t)|^2 / (B_a'(t) A_a(t))`` over
    the nodes of angle ``angle`` (default: the space's own angle).

    ``kind="E2"``: ``int |F|^2 / |E|^4 = sum_{s,t} |F(x)|^2 / K_2(x, x)``
    over the zeros of ``A_a`` and ``B_a``.

    ``F`` must be a member of the matching space (for instance a
    :class:`hbspace.testgen.GeneratedFunction`); the check cannot verify
    membership.

    Raises
    ------
    QuadratureFailure
        If adaptive refinement exhausts its panel budget.
    """
    if kind not in ("E", "E2"):
        raise ValueError("kind must be 'E' or 'E2'")
    sp = space if angle is None else space.with_alpha(angle)
    spec = spec or QuadratureSpec(tail_model="algebraic", tail_exponent=2.0)
    power = 1 if kind == "E" else 2

    def integrand(x):
        return np.abs(_values(F, x)) ** 2 / abs_E_squared(space, x) ** power

    quad = _quad(integrand, window, spec)
    families = [sp] if kind == "E" else [sp, sp.rotated(-math.pi / 2)]
    xs, ws = [], []
    for fam in families:
        ns = find_nodes(fam, -window, window)
        if len(ns) == 0:
            continue
        xs.append(ns.t)
        if kind == "E":
            ws.append(np.array([n.b1 * n.a for n in ns]) / math.pi)
        else:
            ws.append(np.array([n.k2_diag for n in ns]))
    x = np.concatenate(xs) if xs else np.zeros(0)
    w = np.concatenate(ws) if ws else np.zeros(0)
    terms = np.abs(_values(F, x)) ** 2 / w if x.size else np.zeros(0)
    rhs, node_tail = extrapolated_node_sum(terms, x, 2.0)
    return IdentityReport.compare(f"parseval_{kind}", quad.value, float(np.real(rhs)),
                                  tolerance, quad.tail + node_tail + quad.error)


def homogeneous_measure_identity(nu: float, F, window: float = 300.0,
                                 tolerance: float = 1e-5,
                                 spec: QuadratureSpec | None = None) -> IdentityReport:
    """``int |F|^2 / |E_nu|^2 = c_nu int |F|^2 |x|^(2nu+1)`` for ``F`` in
    ``H(E_nu)``; both sides by quadrature with tail extrapolation.

    Raises
    ------
    QuadratureFailure
        If adaptive refinement exhausts its panel budget.
    """
    space = SpaceDescriptor.bessel(nu)
    spec = spec or QuadratureSpec(tail_model="algebraic", tail_exponent=2.0)
    cnu = bessel.c_nu(nu)

    def left(x):
        return np.abs(_values(F, x)) ** 2 / abs_E_squared(space, x)

    def right(x):
        return cnu * np.abs(_values(F, x)) ** 2 * np.abs(x) ** (2 * nu + 1)

    lq = _quad(left, window, spec)
    rq = _quad(right, window, spec)
    return IdentityReport.compare("c_nu_measure", lq.value, rq.value, tolerance,
                                  lq.tail + rq.tail + lq.error + rq.error)
