"""Normalised Bessel companion functions.

For ``nu > -1``::

    A_nu(z) = Gamma(nu + 1) (z/2)**(-nu) J_nu(z)
    B_nu(z) = Gamma(nu + 1) (z/2)**(-nu) J_{nu+1}(z)

are real entire functions (A even, B odd) and ``E_nu = A_nu - i B_nu`` is a
Hermite-Biehler function of exponential type 1.

Evaluation is by compensated power series for ``|z| <= SERIES_RADIUS`` and
through :func:`scipy.special.jv` beyond it. The power series alone is not
usable far out: its terms grow like ``exp(|z|)`` before they cancel, so at
``|z| = 40`` every double-precision digit is gone.

Derivatives never use finite differences. With ``g = B/z`` (an entire
function with its own series) the relations::

    A' = -B,    B' = A - (2 nu + 1) g

are differentiated twice to reach third order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError, RadiusExceeded

SERIES_RADIUS = 4.0
R_MAX = 1.0e4


@dataclass(frozen=True)
class BesselCompanionSeries:
    """Power-series coefficients in ``u = (z/2)**2``.

    ``A(z) = sum coeff_a[n] u**n`` and ``B(z) = (z/2) sum coeff_b[n] u**n``.
    """

    nu: float
    coeff_a: tuple
    coeff_b: tuple
    n_terms: int


@lru_cache(maxsize=64)
def companion_series(nu: float, n_terms: int = 40) -> BesselCompanionSeries:
    if nu <= -1:
        raise DomainError(f"nu must exceed -1, got {nu}")
    a = [1.0]
    for n in range(n_terms - 1):
        a.append(-a[-1] / ((n + 1) * (nu + n + 1)))
    b = [a[n] / (nu + n + 1) for n in range(n_terms)]
    return BesselCompanionSeries(float(nu), tuple(a), tuple(b), n_terms)


@dataclass
class BesselTable:
    """Values and derivatives up to third order at an array of points."""

    a: np.ndarray
    b: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    a3: np.ndarray
    b3: np.ndarray
    g: np.ndarray  # B/z, entire


def _poly(coeffs, u):
    # Horner evaluation, highest order first, with a Neumaier correction on
    # the running sum.
    s = np.zeros_like(u)
    c = np.zeros_like(u)
    for k in reversed(coeffs):
        prod = s * u
        t = prod + k
        big = np.abs(prod) >= abs(k)
        c = c * u + np.where(big, (prod - t) + k, (k - t) + prod)
        s = t
    return s + c


def _series_block(nu, z):
    ser = companion_series(nu)
    u = (0.5 * z) ** 2
    ca = np.array(ser.coeff_a)
    cb = np.array(ser.coeff_b)
    n = np.arange(ser.n_terms)
    a = _poly(ca, u)
    g = 0.5 * _poly(cb, u)
    # g(z) = 1/2 sum cb[n] u^n ;  du/dz = z/2
    d1 = n[1:] * cb[1:]                  # d/du of sum cb u^n
    d2 = n[2:] * (n[2:] - 1) * cb[2:]
    gu = 0.5 * _poly(d1, u)
    guu = 0.5 * _poly(d2, u)
    g1 = gu * (0.5 * z)
    g2 = gu * 0.5 + guu * (0.5 * z) ** 2
    return a, g, g1, g2


def _scipy_block(nu, z):
    gam = math.gamma(nu + 1.0)
    pref = gam * (0.5 * z) ** (-nu)
    a = pref * special.jv(nu, z)
    b = pref * special.jv(nu + 1.0, z)
    g = b / z
    g1 = (a - (2.0 * nu + 2.0) * g) / z
    return a, g, g1


def bessel_table(nu: float, z, r_max: float = R_MAX) -> BesselTable:
    """Evaluate A, B and their first three derivatives at ``z``.

    Raises
    ------
    RadiusExceeded
        If any ``|z| > r_max``.
    """
    if nu <= -1:
        raise DomainError(f"nu must exceed -1, got {nu}")
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    if z.size and np.max(np.abs(z)) > r_max:
        raise RadiusExceeded(f"|z| = {np.max(np.abs(z)):.6g} exceeds R_max = {r_max}")
    c = 2.0 * nu + 1.0
    a = np.empty_like(z)
    g = np.empty_like(z)
    g1 = np.empty_like(z)
    g2 = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS
    if small.any():
        a[small], g[small], g1[small], g2[small] = _series_block(nu, z[small])
    big = ~small
    if big.any():
        # A even, B odd: evaluate in the right half-plane so the principal
        # branch of (z/2)**(-nu) J_nu(z) is the entire function.
        zb = z[big]
        flip = zb.real < 0
        zr = np.where(flip, -zb, zb)
        ab, gb, g1b = _scipy_block(nu, zr)
        a[big] = ab
        g[big] = gb                       # g = B/z is even
        g1[big] = np.where(flip, -g1b, g1b)
    b = z * g
    b1 = a - c * g
    a1 = -b
    a2 = -b1
    b2 = -b - c * g1
    if big.any():
        zb = z[big]
        g2[big] = (b2[big] - 2.0 * g1[big]) / zb
    a3 = -b2
    b3 = -b1 - c * g2
    out = BesselTable(a, b, a1, b1, a2, b2, a3, b3, g)
    for name in ("a", "b", "a1", "b1", "a2", "b2", "a3", "b3", "g"):
        setattr(out, name, getattr(out, name).reshape(shape))
    return out


def eval_bessel_companions(nu: float, z, order: int = 1,
                           r_max: float = R_MAX) -> list[tuple]:
    """Return ``[(A^(k)(z), B^(k)(z)) for k in 0..order]``."""
    if not 0 <= order <= 3:
        raise ValueError("order must be in 0..3")
    t = bessel_table(nu, z, r_max)
    pairs = [(t.a, t.b), (t.a1, t.b1), (t.a2, t.b2), (t.a3, t.b3)]
    if np.ndim(z) == 0:
        pairs = [(complex(p), complex(q)) for p, q in pairs]
    return pairs[: order + 1]


def c_nu(nu: float) -> float:
    """Constant relating the two weights, ``pi 2**(-2nu-1) / Gamma(nu+1)**2``."""
    if nu == -0.5:
        return 1.0  # Gamma(1/2)**2 == pi exactly; avoid the rounded quotient
    return math.pi * 2.0 ** (-2.0 * nu - 1.0) / math.gamma(nu + 1.0) ** 2


def asymptotic_magnitude(nu: float, x: float) -> float:
    """Leading-order estimate of ``|E_nu(x)|**2`` for ``|x| >= 1``.

    Combining the large-argument form of J_nu with the normalisation above
    gives ``|E_nu(x)|**2 ~ |x|**-(2nu+1) / c_nu``. Intended for tail bounds,
    not for primary values.
    """
    if abs(x) < 1:
        raise DomainError("asymptotic magnitude needs |x| >= 1")
    return abs(x) ** (-(2.0 * nu + 1.0)) / c_nu(nu)
