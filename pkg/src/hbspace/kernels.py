"""Reproducing kernels and the P/Q interpolating functions.

``K(w, z) = [B(z) A(conj w) - A(z) B(conj w)] / (pi (z - conj w))`` is the
kernel of H(E); ``K_2 = K J`` with ``J(w, z) = 2 [A(conj w) A(z) +
B(conj w) B(z)]`` is the kernel of H(E^2). Both are independent of the
rotation angle, so they are always evaluated from the unrotated pair.

``P_s = A_alpha**2 / (z - s)**2`` and ``Q_s = A_alpha**2 / (z - s)`` are
attached to zeros ``s`` of ``A_alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentNodes
from .space import SpaceDescriptor, eval_companions

# below this distance removable singularities are evaluated by Taylor data
NEAR = 1e-6
# P and Q: Taylor radius and cancellation-guard radius (divided by type/pi)
PQ_NEAR = 1e-4
PQ_MID = 1e-2


@dataclass
class KernelValue:
    value: complex | np.ndarray
    is_diagonal_limit: bool | np.ndarray


def _point(x):
    return x.t if hasattr(x, "t") else x


def _kernel_parts(space, w, z):
    base = space.with_alpha(0.0)
    z = np.asarray(z, dtype=complex)
    u = np.conj(np.asarray(w, dtype=complex))
    cz = eval_companions(base, z)
    cu = eval_companions(base, u)
    h = z - u
    num = cz.b * cu.a - cz.a * cu.b
    near = np.abs(h) < NEAR * np.maximum(1.0, np.abs(u))
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = num / (math.pi * h)
    # f(z) = B(z)A(u) - A(z)B(u) vanishes at z = u
    f1 = cu.b1 * cu.a - cu.a1 * cu.b
    f2 = cu.b2 * cu.a - cu.a2 * cu.b
    f3 = cu.b3 * cu.a - cu.a3 * cu.b
    taylor = (f1 + f2 * h / 2 + f3 * h * h / 6) / math.pi
    k = np.where(near, taylor, direct)
    return k, near, cz, cu


def _wrap(v, near, scalar):
    if scalar:
        return KernelValue(complex(v), bool(near))
    return KernelValue(v, near)


def eval_K(space: SpaceDescriptor, w, z) -> KernelValue:
    """Reproducing kernel of H(E); the diagonal limit is used at ``z = conj w``."""
    scalar = np.ndim(w) == 0 and np.ndim(z) == 0
    k, near, _, _ = _kernel_parts(space, w, z)
    return _wrap(k, near, scalar)


def eval_K2(space: SpaceDescriptor, w, z) -> KernelValue:
    """Reproducing kernel of H(E^2), ``K(w, z) J(w, z)``."""
    scalar = np.ndim(w) == 0 and np.ndim(z) == 0
    k, near, cz, cu = _kernel_parts(space, w, z)
    j = 2.0 * (cu.a * cz.a + cu.b * cz.b)
    return _wrap(k * j, near, scalar)


def _kernel_dz(space, w, z):
    z = np.asarray(z, dtype=complex)
    u = np.conj(np.asarray(w, dtype=complex))
    k, near, cz, cu = _kernel_parts(space, w, z)
    h = z - u
    with np.errstate(divide="ignore", invalid="ignore"):
        dk_direct = ((cz.b1 * cu.a - cz.a1 * cu.b) / math.pi - k) / h
    f2 = cu.b2 * cu.a - cu.a2 * cu.b
    f3 = cu.b3 * cu.a - cu.a3 * cu.b
    dk_near = (f2 / 2 + f3 * h / 3) / math.pi
    return k, np.where(near, dk_near, dk_direct), cz, cu


def eval_K_dz(space: SpaceDescriptor, w, z):
    """``d/dz K(w, z)``."""
    out = _kernel_dz(space, w, z)[1]
    return complex(out) if np.ndim(out) == 0 else out


def eval_K2_dz(space: SpaceDescriptor, w, z):
    """``d/dz K_2(w, z)``."""
    k, dk, cz, cu = _kernel_dz(space, w, z)
    j = 2.0 * (cu.a * cz.a + cu.b * cz.b)
    dj = 2.0 * (cu.a * cz.a1 + cu.b * cz.b1)
    out = dk * j + k * dj
    return complex(out) if np.ndim(out) == 0 else out


def _quotient(space, s, z):
    """``q = A_alpha(z) / (z - s)`` with ``dq/dz`` and ``A_alpha(z)`` at a
    zero ``s`` of ``A_alpha``.

    Within ``PQ_NEAR`` of ``s`` a Taylor polynomial is used; within
    ``PQ_MID`` the computed ``A_alpha(s)`` (zero up to rounding) is
    subtracted before dividing.
    """
    s = float(_point(s))
    z = np.asarray(z, dtype=complex)
    cz = eval_companions(space, z)
    cs = eval_companions(space, s)
    a0, a1, a2, a3 = cs.a.real, cs.a1.real, cs.a2.real, cs.a3.real
    scale = max(1.0, space.exponential_type / math.pi)
    h = z - s
    near = np.abs(h) < PQ_NEAR / scale
    mid = np.abs(h) < PQ_MID / scale
    hs = np.where(near, 1.0, h)
    q = np.where(mid, (cz.a - a0) / hs, cz.a / hs)
    q = np.where(near, a1 + a2 * h / 2 + a3 * h * h / 6, q)
    dq = np.where(near, a2 / 2 + a3 * h / 3, (cz.a1 - q) / hs)
    return q, dq, cz.a, cz.a1


def _out(v):
    return complex(v) if np.ndim(v) == 0 else v


def eval_P(space: SpaceDescriptor, s, z):
    """``A_alpha(z)**2 / (z - s)**2`` at a zero ``s`` of ``A_alpha``."""
    q, _, _, _ = _quotient(space, s, z)
    return _out(q * q)


def eval_Q(space: SpaceDescriptor, s, z):
    """``A_alpha(z)**2 / (z - s)`` at a zero ``s`` of ``A_alpha``."""
    q, _, A, _ = _quotient(space, s, z)
    return _out(A * q)


def eval_P_dz(space: SpaceDescriptor, s, z):
    q, dq, _, _ = _quotient(space, s, z)
    return _out(2 * q * dq)


def eval_Q_dz(space: SpaceDescriptor, s, z):
    q, dq, A, A1 = _quotient(space, s, z)
    return _out(A1 * q + A * dq)


def quotient_third_derivative(a, b) -> float:
    """Third derivative of ``A/B`` from ``a = (A, A', A'', A''')`` and
    ``b = (B, B', B'', B''')`` by the expanded quotient rule."""
    A0, A1, A2, A3 = a
    B0, B1, B2, B3 = b
    return (A3 / B0 - 3 * A2 * B1 / B0 ** 2 - 3 * A1 * B2 / B0 ** 2
            + 6 * A1 * B1 ** 2 / B0 ** 3 - A0 * B3 / B0 ** 2
            + 6 * A0 * B1 * B2 / B0 ** 3 - 6 * A0 * B1 ** 3 / B0 ** 4)


@dataclass(frozen=True)
class PQProducts:
    pp: float
    qq: float
    p_norm_sq: float
    q_norm_sq: float


def _ratio(space, s):
    c = eval_companions(space, s)
    return c.a1.real / c.b.real, c


def p_norm_sq(space: SpaceDescriptor, s) -> float:
    """``||P_s||^2`` in H(E^2) via the third derivative of ``A/B``."""
    s = float(_point(s))
    r, c = _ratio(space, s)
    d3 = quotient_third_derivative(
        (c.a.real, c.a1.real, c.a2.real, c.a3.real),
        (c.b.real, c.b1.real, c.b2.real, c.b3.real))
    return -0.5 * math.pi * (r ** 3 + d3 / 6.0)


def q_norm_sq(space: SpaceDescriptor, s) -> float:
    r, _ = _ratio(space, float(_point(s)))
    return -0.5 * math.pi * r


def inner_products_PQ(space: SpaceDescriptor, s_k, s_l) -> PQProducts:
    """Closed-form inner products of P and Q functions at zeros of ``A_alpha``.

    ``pp = <P_k, P_l>``, ``qq = <Q_k, Q_l> = 0``; the norms refer to
    ``s_k``.

    Raises
    ------
    CoincidentNodes
        If ``s_k == s_l``.
    """
    sk, sl = float(_point(s_k)), float(_point(s_l))
    if sk == sl:
        raise CoincidentNodes("off-diagonal products need distinct nodes")
    rk, _ = _ratio(space, sk)
    rl, _ = _ratio(space, sl)
    pp = -(rk + rl) * math.pi / (2.0 * (sk - sl) ** 2)
    return PQProducts(pp=pp, qq=0.0, p_norm_sq=p_norm_sq(space, sk),
                      q_norm_sq=q_norm_sq(space, sk))
