# %% [markdown]
# # Partial fraction identities and Parseval sums
#
# Node sums of the form ``sum c(t) / (z - t)**k`` have closed forms. The
# quartic identity at ``z = 1/2`` in the Paley-Wiener space of type pi equals
# ``pi**3 / 3``.

# %%
from __future__ import annotations

import math

import numpy as np

from hbspace import SpaceDescriptor
from hbspace.identities import check_partial_fraction, parseval_node_sum

pw = SpaceDescriptor.paley_wiener(math.pi)
r = check_partial_fraction(pw, "AB_4", (0.5,), window=300, tolerance=1e-9)
print(r.lhs, math.pi ** 3 / 3, r.abs_err, r.passed)

# %% [markdown]
# The energy of ``sinc`` computed from values and derivatives at the nodes.


# %%
class Sinc:
    def __call__(self, z):
        return np.sinc(np.asarray(z, dtype=complex))


p = parseval_node_sum(pw, Sinc(), tolerance=1e-6)
print(p.abs_err, p.tail, p.passed)
