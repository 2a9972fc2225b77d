# %% [markdown]
# # Spaces and interpolation nodes
#
# Two families are available: the Paley-Wiener space of type tau, generated by
# ``E(z) = exp(-i tau z)``, and the homogeneous Bessel spaces of order nu.
# Nodes are the real zeros of the rotated companion ``B_alpha``.

# %%
from __future__ import annotations

import math

import numpy as np

from hbspace import SpaceDescriptor, eval_companions, find_nodes

pw = SpaceDescriptor.paley_wiener(math.pi)
bes = SpaceDescriptor.bessel(0.5)

# %% [markdown]
# For ``tau = pi`` the companions are ``cos(pi z)`` and ``sin(pi z)``, so the
# nodes of the unrotated space are the integers.

# %%
ns = find_nodes(pw, -5, 5)
print(ns.t)

# %% [markdown]
# Bessel nodes are the zeros of ``J_{nu+1}``, roughly pi apart for large |t|.

# %%
nb = find_nodes(bes, 0, 30)
print(np.round(nb.t, 6))
print(np.round(np.diff(nb.t), 4))

# %% [markdown]
# Companion values and their derivatives at a complex point.

# %%
c = eval_companions(bes, 1.0 + 0.5j)
print(c.a, c.b, c.a1, c.b1)
