"""
Simulate the two-coin walk and watch part of it stay at the origin.

Starting from the Bell-like coin state at β = π/4, the probability at x = 0
settles near 3 - 2√2 instead of spreading out. The non-localizing start
disperses.
"""

import math

from qwalk2c import CoinParameters, InitialCoinState, evolve, position_distribution

coin = CoinParameters(math.pi / 4)

for label, initial in [("bell", InitialCoinState.bell()), ("nonloc", InitialCoinState.nonlocalizing())]:
    print(f"{label}:")
    for t in (10, 100, 1000):
        dist = position_distribution(evolve(initial, coin, t))
        print(f"  t={t:5d}  p(0)={dist.at(0):.6f}  p(±1)={dist.at(-1):.6f},{dist.at(1):.6f}")

print(f"3 - 2*sqrt(2) = {3 - 2 * math.sqrt(2):.6f}")
