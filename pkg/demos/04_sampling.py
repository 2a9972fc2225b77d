# %% [markdown]
# # Reconstruction from finitely many samples
#
# Given values and derivatives at a finite set of nodes, ``reconstruct``
# returns the function of the space that matches them.

# %%
from __future__ import annotations

import math

import numpy as np

from hbspace import SpaceDescriptor, find_nodes
from hbspace.sampling import reconstruct

pw = SpaceDescriptor.paley_wiener(math.pi)
ns = find_nodes(pw, -10, 10)
rng = np.random.default_rng(0)
p = rng.standard_normal(len(ns))
q = rng.standard_normal(len(ns))
F = reconstruct(pw, ns, p, q)

# %% [markdown]
# The data are reproduced up to rounding.

# %%
print(np.abs(F(ns.t) - p).max(), np.abs(F.derivative(ns.t) - q).max())
