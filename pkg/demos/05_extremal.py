# %% [markdown]
# # Checking a one-sided approximation
#
# ``M(x) = sinc(x)**2`` lies above ``g = M - sin(pi x)**2 / (1 + x**2)`` and
# interpolates it with derivative at the zeros of ``B``. The weighted error is
# ``(pi/2)(1 - exp(-2 pi))``.

# %%
from __future__ import annotations

import math

import numpy as np

from hbspace import SpaceDescriptor
from hbspace.extremal import ExtremalProblem, Profile, verify_candidate

pw = SpaceDescriptor.paley_wiener(math.pi)


def dsinc2(r):
    r = np.asarray(r, dtype=float)
    with np.errstate(all="ignore"):
        d = 2 * np.sinc(r) * (np.cos(np.pi * r) - np.sinc(r)) / r
    return np.where(r == 0, 0.0, d)


def bump(r):
    return np.sin(np.pi * r) ** 2 / (1 + r * r)


def dbump(r):
    return (np.pi * np.sin(2 * np.pi * r) / (1 + r * r)
            - 2 * r * np.sin(np.pi * r) ** 2 / (1 + r * r) ** 2)


M = Profile(lambda r: np.sinc(r) ** 2, dsinc2)
prob = ExtremalProblem(1, lambda r: M.f(r) - bump(r), lambda r: M.df(r) - dbump(r),
                       "majorant", pw)
rep = verify_candidate(prob, M)
print(rep.passed, rep.weighted_error, math.pi / 2 * (1 - math.exp(-2 * math.pi)))
