"""
The weak limit of X_t / t.

An atom of mass c00 sits at the origin; the rest spreads over (-cos β, cos β)
with inverse-square-root edges. Here the simulated CDF of X_t / t is compared
with the limit CDF at a few points.
"""

import math

import numpy as np

from qwalk2c import CoinParameters, InitialCoinState, evolve, position_distribution
from qwalk2c.limit_laws import limit_cdf, limit_density

coin = CoinParameters(math.pi / 3)
initial = InitialCoinState.normalized([1, 1j, 0, 1])
d = limit_density(coin, initial)
print(f"c00={d.c00:.6f}  (c0, c1, c2)={tuple(round(c, 6) for c in d.coefficients)}  support=±{d.support_bound:.4f}")

t = 2000
dist = position_distribution(evolve(initial, coin, t))
empirical = np.cumsum(dist.probabilities)
for y in (-0.4, -0.1, 0.1, 0.4):
    idx = np.searchsorted(dist.support / t, y, side="right") - 1
    print(f"y={y:+.1f}  F_t={empirical[idx]:.4f}  F={limit_cdf(d, y):.4f}")

# Lattice mass near the origin plays the role of the atom.
print(f"p_t(|x| <= 20)={dist.window(-20, 20).sum():.4f}  c00={d.c00:.4f}")
