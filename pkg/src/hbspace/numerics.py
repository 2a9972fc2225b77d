"""Shared numerical substrate.

Adaptive Gauss-Kronrod quadrature with tail extrapolation, compensated
summation, safeguarded Newton root refinement and central differences.
Everything here is deterministic: the same inputs produce bit-identical
outputs regardless of call order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NoSignChange, PanelBudgetExceeded

# Kronrod 15-point abscissae (positive half, descending) and weights;
# every second abscissa is a 7-point Gauss node.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and tail model for :func:`integrate`.

    ``tail_model`` is ``"uniform"`` (no tail beyond the interval) or
    ``"algebraic"``, in which case :func:`integrate_window` extrapolates the
    contribution beyond the window assuming the integrand decays like
    ``|x|**-tail_exponent``.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-8
    max_panels: int = 200_000
    tail_model: str = "uniform"
    tail_exponent: float = 2.0

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        if self.max_panels < 1:
            raise ValueError("max_panels must be >= 1")
        if self.tail_model not in ("uniform", "algebraic"):
            raise ValueError(f"unknown tail model {self.tail_model!r}")
        if self.tail_model == "algebraic" and self.tail_exponent <= 1:
            raise ValueError("algebraic tail needs exponent > 1")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float
    tail: float = 0.0
    panels: int = 0


def _gk15(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise PanelBudgetExceeded("integrand returned non-finite values")
    k = half * (fx @ _KW)
    g = half * (fx @ _GW)
    return k, np.abs(k - g)


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              spec: QuadratureSpec | None = None,
              initial_panels: int = 1) -> IntegralResult:
    """Integrate a vectorised real function over ``[a, b]``.

    All panels of one refinement level are evaluated in a single call to
    ``f``. A panel is split when its embedded error exceeds its
    length-proportional share of the global tolerance, so an integrand with
    a jump never converges and raises :class:`PanelBudgetExceeded` instead
    of returning a silently wrong value.

    Parameters
    ----------
    f : callable
        Maps a 1-D float array to a 1-D float array of the same shape.
    a, b : float
        Finite integration limits.
    spec : QuadratureSpec, optional
    initial_panels : int
        Number of equal panels to start from; useful for long oscillatory
        intervals.

    Returns
    -------
    IntegralResult
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return IntegralResult(0.0, 0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    n0 = max(1, int(initial_panels))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    length = b - a
    done_val = []
    done_err = []
    total_panels = n0
    while True:
        if total_panels > spec.max_panels:
            raise PanelBudgetExceeded(
                f"more than {spec.max_panels} panels needed on [{a}, {b}]")
        k, e = _gk15(f, lo, hi)
        est = math.fsum(done_val) + math.fsum(k.tolist())
        tol = max(spec.abs_tol, spec.rel_tol * abs(est))
        share = tol * (hi - lo) / length
        bad = e > share
        done_val.extend(k[~bad].tolist())
        done_err.extend(e[~bad].tolist())
        if not bad.any():
            break
        mid = 0.5 * (lo[bad] + hi[bad])
        if np.any((mid <= lo[bad]) | (mid >= hi[bad])):
            raise PanelBudgetExceeded("panel width reached machine resolution")
        lo, hi = np.concatenate([lo[bad], mid]), np.concatenate([mid, hi[bad]])
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
        total_panels += int(bad.sum())
    return IntegralResult(sign * math.fsum(done_val), math.fsum(done_err),
                          0.0, total_panels)


def richardson_tail(full: complex, half: complex, decay: float,
                    ratio: float = 2.0) -> tuple[complex, float]:
    """Extrapolate a truncated sum or integral to infinity.

    ``full`` and ``half`` are truncations at widths ``T`` and ``T/ratio`` of a
    quantity whose remainder behaves like ``c * T**(1 - decay)``.

    Returns
    -------
    (extrapolated, tail_estimate)
    """
    p = decay - 1.0
    corr = (full - half) / (ratio ** p - 1.0)
    return full + corr, float(abs(corr))


def extrapolated_node_sum(terms, x, decay: float,
                          fraction: float = 0.5) -> tuple[complex, float]:
    """Sum of ``terms`` located at points ``x``, extrapolated to infinity.

    Each side of the origin is handled separately. Its full sum and the sum
    over ``|x| <= fraction * max|x|`` are treated as truncations at the
    effective cutoffs half a gap past the last included point, and
    combined by :func:`richardson_tail`. Using the actual cutoffs instead
    of the nominal window widths removes the jitter caused by where the
    window edge falls between two points.
    """
    terms = np.asarray(terms)
    x = np.asarray(x, dtype=float)
    total = compensated_sum(terms[x == 0]) if np.any(x == 0) else 0.0
    tail = 0.0
    for mask in (x > 0, x < 0):
        ax = np.abs(x[mask])
        if ax.size == 0:
            continue
        order = np.argsort(ax, kind="stable")
        ax, ts = ax[order], terms[mask][order]
        full = compensated_sum(ts)
        n_in = int(np.searchsorted(ax, fraction * ax[-1], side="right"))
        if ax.size < 3 or n_in < 1 or n_in >= ax.size:
            total += full
            continue
        half = compensated_sum(ts[:n_in])
        x_full = ax[-1] + 0.5 * (ax[-1] - ax[-2])
        x_half = 0.5 * (ax[n_in - 1] + ax[n_in])
        ext, t = richardson_tail(full, half, decay, x_full / x_half)
        total += ext
        tail += t
    return total, tail


def integrate_window(f: Callable[[np.ndarray], np.ndarray], half_width: float,
                     spec: QuadratureSpec | None = None, center: float = 0.0,
                     one_sided: bool = False,
                     period: float | None = None) -> IntegralResult:
    """Integrate over ``[center - T, center + T]`` (or ``[center, center + T]``).

    With ``spec.tail_model == "algebraic"`` the result is extrapolated to
    the whole line (half-line) from the inner and outer halves of the
    window, and ``tail`` holds the size of the correction.
    """
    spec = spec or QuadratureSpec()
    T = float(half_width)
    per = period if period else max(T / 64.0, 1.0)
    n_half = max(1, int(math.ceil(0.5 * T / per)))

    def seg(lo, hi):
        return integrate(f, lo, hi, spec, initial_panels=n_half)

    if one_sided:
        inner = seg(center, center + 0.5 * T)
        outer = seg(center + 0.5 * T, center + T)
    else:
        inner_l = seg(center - 0.5 * T, center)
        inner_r = seg(center, center + 0.5 * T)
        outer_l = seg(center - T, center - 0.5 * T)
        outer_r = seg(center + 0.5 * T, center + T)
        inner = IntegralResult(inner_l.value + inner_r.value,
                               inner_l.error + inner_r.error, 0.0,
                               inner_l.panels + inner_r.panels)
        outer = IntegralResult(outer_l.value + outer_r.value,
                               outer_l.error + outer_r.error, 0.0,
                               outer_l.panels + outer_r.panels)
    full = inner.value + outer.value
    err = inner.error + outer.error
    panels = inner.panels + outer.panels
    if spec.tail_model == "uniform":
        return IntegralResult(full, err, 0.0, panels)
    value, tail = richardson_tail(full, inner.value, spec.tail_exponent)
    return IntegralResult(float(value), err, tail, panels)


def compensated_sum(terms) -> complex | float:
    """Sum a sequence with error bounded independently of its length.

    Real and imaginary parts are accumulated with :func:`math.fsum`, which is
    exactly rounded, so the result does not depend on term order.
    """
    arr = np.asarray(list(terms) if not isinstance(terms, np.ndarray) else terms)
    if arr.size == 0:
        return 0.0
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))
    return math.fsum(arr.astype(float).tolist())


def neumaier_sum(arr: np.ndarray, axis: int = -1) -> np.ndarray:
    """Neumaier-compensated sum along ``axis``, in the stored order."""
    arr = np.moveaxis(np.asarray(arr), axis, -1)
    if np.iscomplexobj(arr):
        return neumaier_sum(arr.real) + 1j * neumaier_sum(arr.imag)
    s = np.zeros(arr.shape[:-1])
    c = np.zeros(arr.shape[:-1])
    for k in range(arr.shape[-1]):
        x = arr[..., k]
        t = s + x
        big = np.abs(s) >= np.abs(x)
        c += np.where(big, (s - t) + x, (x - t) + s)
        s = t
    return s + c


def refine_roots(f: Callable[[np.ndarray], np.ndarray],
                 df: Callable[[np.ndarray], np.ndarray],
                 lo, hi, bisect_width: float = 1e-3,
                 max_newton: int = 60) -> np.ndarray:
    """Vectorised bracketed root refinement.

    Bisection shrinks every bracket below ``bisect_width`` (relative to
    ``max(1, |x|)``), then Newton steps with the analytic derivative take
    over. A Newton step leaving the current bracket is replaced by a
    bisection step.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    flo = np.asarray(f(lo), dtype=float)
    fhi = np.asarray(f(hi), dtype=float)
    root = np.full(lo.shape, np.nan)
    exact_lo = flo == 0
    exact_hi = (fhi == 0) & ~exact_lo
    root[exact_lo] = lo[exact_lo]
    root[exact_hi] = hi[exact_hi]
    active = ~(exact_lo | exact_hi)
    if np.any(np.sign(flo[active]) == np.sign(fhi[active])):
        raise NoSignChange("bracket endpoints have the same sign")

    for _ in range(200):
        scale = np.maximum(1.0, np.abs(lo))
        wide = active & ((hi - lo) > bisect_width * scale)
        if not wide.any():
            break
        mid = 0.5 * (lo + hi)
        fm = np.asarray(f(mid), dtype=float)
        left = wide & (np.sign(fm) == np.sign(flo))
        right = wide & ~left
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(right, mid, hi)
        fhi = np.where(right, fm, fhi)

    x = 0.5 * (lo + hi)
    eps = np.finfo(float).eps
    for _ in range(max_newton):
        if not active.any():
            break
        fx = np.asarray(f(x), dtype=float)
        dfx = np.asarray(df(x), dtype=float)
        hit = active & (fx == 0)
        root[hit] = x[hit]
        active &= ~hit
        # keep the bracket valid for the bisection fallback
        same = np.sign(fx) == np.sign(flo)
        lo = np.where(active & same, x, lo)
        flo = np.where(active & same, fx, flo)
        hi = np.where(active & ~same, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = fx / dfx
        xn = x - step
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        conv = active & ~bad & (np.abs(step) <= 4 * eps * np.maximum(1.0, np.abs(x)))
        conv |= active & ((hi - lo) <= 4 * eps * np.maximum(1.0, np.abs(x)))
        root[conv] = xn[conv]
        active &= ~conv
        x = np.where(active, xn, x)
    root[active] = x[active]
    return root


def refine_root(f: Callable[[float], float], df: Callable[[float], float],
                bracket: tuple[float, float]) -> float:
    """Root of ``f`` inside ``bracket`` (``f(lo) * f(hi) < 0`` required).

    Raises
    ------
    NoSignChange
        If ``f`` has the same sign at both ends.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo
    vf = np.vectorize(lambda x: float(f(float(x))), otypes=[float])
    vdf = np.vectorize(lambda x: float(df(float(x))), otypes=[float])
    return float(refine_roots(vf, vdf, [lo], [hi])[0])


def central_difference(f: Callable, z, h: float = 1e-5):
    """Symmetric difference quotient ``(f(z + h) - f(z - h)) / 2h``."""
    z = np.asarray(z)
    return (np.asarray(f(z + h)) - np.asarray(f(z - h))) / (2.0 * h)
