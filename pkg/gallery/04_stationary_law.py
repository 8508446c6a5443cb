"""
The stationary distribution near the origin.

lim p_t(x) is geometric in |x| with ratio r = (1 - sin β)^4 sec^4 β. The two
tails carry different prefactors, so the trapped mass can be lopsided. A
start in |00> moves right on its first step, yet the trapped part sits mostly
on the left.
"""

import math

from qwalk2c import CoinParameters, InitialCoinState, evolve, position_distribution
from qwalk2c.limit_laws import limit_density, stationary_law

coin = CoinParameters(math.pi / 3)
initial = InitialCoinState([1, 0, 0, 0])
law = stationary_law(coin, initial)
dist = position_distribution(evolve(initial, coin, 4000))

print(f"r={law.ratio:.6f}  J+={law.j_plus:.6f}  J-={law.j_minus:.6f}")
for x in range(-4, 5):
    print(f"x={x:+d}  limit={law.probability(x):.6f}  t=4000: {dist.at(x):.6f}")
print(f"total trapped mass={law.total_mass():.10f}  atom c00={limit_density(coin, initial).c00:.10f}")
