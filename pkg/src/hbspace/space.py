"""Space descriptors and companion-function evaluation.

Two structure functions are supported:

* Paley-Wiener, ``E(z) = exp(-i tau z)``, so ``A = cos(tau z)``,
  ``B = sin(tau z)``;
* homogeneous Bessel spaces, ``E = A_nu - i B_nu`` (see :mod:`hbspace.bessel`).

A rotation angle ``alpha`` selects the pair ``exp(i alpha) E = A_alpha - i
B_alpha``. Only ``alpha mod pi`` matters for node sets, so it is stored
reduced to ``[0, pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import bessel

PW = "pw"
BESSEL = "bessel"


def _reduce_angle(alpha: float) -> float:
    a = math.fmod(float(alpha), math.pi)
    if a < 0:
        a += math.pi
    if a >= math.pi or abs(a - math.pi) < 1e-15:
        a = 0.0
    if abs(a) < 1e-15:
        a = 0.0
    return a


@dataclass(frozen=True)
class SpaceDescriptor:
    family: str
    tau: float | None = None
    nu: float | None = None
    alpha: float = 0.0

    def __post_init__(self):
        if self.family == PW:
            if self.tau is None or not self.tau > 0:
                raise ValueError("Paley-Wiener type tau must be positive")
        elif self.family == BESSEL:
            if self.nu is None or not self.nu > -1:
                raise ValueError("Bessel parameter nu must exceed -1")
        else:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "alpha", _reduce_angle(self.alpha))

    @classmethod
    def paley_wiener(cls, tau: float = math.pi, alpha: float = 0.0):
        return cls(PW, tau=float(tau), alpha=alpha)

    @classmethod
    def bessel(cls, nu: float, alpha: float = 0.0):
        return cls(BESSEL, nu=float(nu), alpha=alpha)

    def rotated(self, delta: float) -> "SpaceDescriptor":
        """Descriptor for angle ``alpha + delta`` (same underlying E)."""
        return replace(self, alpha=self.alpha + delta)

    def with_alpha(self, alpha: float) -> "SpaceDescriptor":
        return replace(self, alpha=alpha)

    @property
    def is_bessel(self) -> bool:
        return self.family == BESSEL

    @property
    def exponential_type(self) -> float:
        """Exponential type of E."""
        return self.tau if self.family == PW else 1.0

    def to_json(self) -> dict:
        d = {"family": self.family}
        if self.family == PW:
            d["tau"] = self.tau
        else:
            d["nu"] = self.nu
        d["alpha"] = self.alpha
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SpaceDescriptor":
        fam = d.get("family")
        if fam == PW:
            return cls.paley_wiener(d["tau"], d.get("alpha", 0.0))
        if fam == BESSEL:
            return cls.bessel(d["nu"], d.get("alpha", 0.0))
        raise ValueError(f"unknown family {fam!r}")


@dataclass
class CompanionValues:
    """``A_alpha``, ``B_alpha`` and derivatives (``a3``/``b3`` are third order)."""

    a: np.ndarray
    b: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    a3: np.ndarray = None
    b3: np.ndarray = None


def _base_companions(space: SpaceDescriptor, z):
    z = np.asarray(z, dtype=complex)
    if space.family == PW:
        t = space.tau
        # reduce tau z / pi = k + r so that integer multiples of pi / tau are
        # exact zeros (exact for tau = pi, where tau z / pi is z itself)
        u = z if t == math.pi else t * z / math.pi
        k = np.round(u.real)
        sign = 1.0 - 2.0 * np.mod(k, 2.0)
        r = math.pi * (u - k)
        c = sign * np.cos(r)
        s = sign * np.sin(r)
        return (c, s, -t * s, t * c, -t * t * c, -t * t * s,
                t ** 3 * s, -t ** 3 * c)
    tab = bessel.bessel_table(space.nu, z)
    return (tab.a, tab.b, tab.a1, tab.b1, tab.a2, tab.b2, tab.a3, tab.b3)


def eval_companions(space: SpaceDescriptor, z) -> CompanionValues:
    """``A_alpha, B_alpha`` with derivatives up to third order at ``z``.

    ``A_alpha = cos(alpha) A + sin(alpha) B`` and
    ``B_alpha = -sin(alpha) A + cos(alpha) B``. Scalar input gives complex
    scalars, array input gives arrays.
    """
    base = _base_companions(space, z)
    ca, sa = math.cos(space.alpha), math.sin(space.alpha)
    if space.alpha == 0.0:
        ca, sa = 1.0, 0.0
    out = []
    for k in range(4):
        A, B = base[2 * k], base[2 * k + 1]
        out.append(ca * A + sa * B)
        out.append(-sa * A + ca * B)
    if np.ndim(z) == 0:
        out = [complex(v) for v in out]
    return CompanionValues(*out)


def eval_E(space: SpaceDescriptor, z):
    """``E(z) = A(z) - i B(z)`` (unrotated companions)."""
    A, B = _base_companions(space, z)[:2]
    e = A - 1j * B
    return complex(e) if np.ndim(z) == 0 else e


def eval_E_star(space: SpaceDescriptor, z):
    """``E*(z) = conj(E(conj z)) = A(z) + i B(z)``."""
    A, B = _base_companions(space, z)[:2]
    e = A + 1j * B
    return complex(e) if np.ndim(z) == 0 else e


def abs_E_squared(space: SpaceDescriptor, t):
    """``|E(t)|**2`` for real ``t``."""
    t = np.asarray(t, dtype=float)
    if space.family == PW:
        return np.ones_like(t)
    A, B = _base_companions(space, t)[:2]
    return A.real ** 2 + B.real ** 2


def phase_derivative(space: SpaceDescriptor, t):
    """Derivative of the phase function at real ``t``; always positive.

    Paley-Wiener: ``tau``. Bessel: ``1 - (2nu+1) A B / (t |E|^2)``, where
    ``B/t`` is evaluated as an entire function so ``t = 0`` needs no special
    case (the limit there is ``1 / (2nu + 2)``).
    """
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    if space.family == PW:
        out = np.full(t.shape, space.tau)
    else:
        tab = bessel.bessel_table(space.nu, t)
        a, b, g = tab.a.real, tab.b.real, tab.g.real
        out = 1.0 - (2.0 * space.nu + 1.0) * a * g / (a * a + b * b)
    return float(out) if scalar else out


def unwrapped_phase(space: SpaceDescriptor, t: np.ndarray) -> np.ndarray:
    """Continuous phase ``phi`` on an increasing grid fine enough that
    consecutive increments stay below ``pi``; normalised so that
    ``phi(0) = 0`` when 0 lies in the grid's span (both families have
    ``E(0)`` real and positive)."""
    t = np.asarray(t, dtype=float)
    if space.family == PW:
        return space.tau * t
    e = eval_E(space, t)
    ph = np.unwrap(-np.angle(e))
    # anchor: phi is odd for these families (A even, B odd), so phi(0) = 0
    i0 = int(np.argmin(np.abs(t)))
    # otherwise the principal branch at t[0] is kept, which is correct mod 2 pi
    if t[0] <= 0 <= t[-1]:
        ph0 = ph[i0] - phase_derivative(space, t[i0]) * t[i0]
        ph = ph - 2 * math.pi * round(ph0 / (2 * math.pi))
    return ph
