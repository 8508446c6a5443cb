"""
Look at the walk in momentum space.

The one-step operator at wavenumber k factorizes into two copies of a 2x2
unitary. Two of its four branches have eigenvalue -1 for every k. Those flat
bands do not move, and the weight the initial state puts on them becomes the
atom of the limit law.
"""

import math

import numpy as np

from qwalk2c import CoinParameters, InitialCoinState
from qwalk2c.spectral import branch_weights, eigen_system, momentum_operator

coin = CoinParameters(math.pi / 4)
bell = InitialCoinState.bell()

for k in np.linspace(0, 2 * math.pi, 5, endpoint=False):
    m = momentum_operator(k, coin)
    es = eigen_system(k, coin)
    gap = np.max(np.abs(m.u_ec - np.kron(m.u_half, m.u_half)))
    print(f"k={k:.3f}  Λ={np.round(es.Lambdas, 4)}  h1={es.group_velocities[0]:+.4f}  factorization gap={gap:.1e}")

ks = np.linspace(0, 2 * math.pi, 4096, endpoint=False)
flat = branch_weights(ks, coin, bell)[:, 1:3].sum(axis=1).mean()
print(f"flat-band weight (mean over k) = {flat:.10f}, sqrt(2) - 1 = {math.sqrt(2) - 1:.10f}")
