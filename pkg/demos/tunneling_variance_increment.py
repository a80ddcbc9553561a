"""
How much variance does tunneling add per step?
==============================================

A tunneling channel moves the walker d sites right with probability p or left
with probability q, each time it fires.  Written in terms of a bias beta and a
movement probability P (p = beta P, q = (1 - beta) P), the extra variance per
step is

    G = d P^d (d (2 beta - 1)^2 (1 - P^d) + 4 beta (1 - beta)).
"""

import numpy as np

from dqwalk import channel_invariants, g_function, tunneling_from_bias

###############################################################################
# G against the bias, at P = 1/4.  The curves are symmetric around beta = 1/2.

betas = np.linspace(0, 1, 11)
print("beta  " + "  ".join(f"d={d:<6d}" for d in range(1, 5)))
for beta in betas:
    print(f"{beta:4.1f}  " + "  ".join(f"{g_function(beta, d, 0.25):8.5f}" for d in range(1, 5)))

###############################################################################
# For an unbiased channel G collapses to d P^d, so larger hops only pay off
# once P is large enough: the curves for different d cross.

print()
for P in (0.2, 0.5, 0.8, 1.0):
    print(f"P={P:.1f}", [round(g_function(0.5, d, P), 4) for d in range(1, 5)])

###############################################################################
# The same number comes straight out of the Kraus operators: it is the
# variance of the shift distribution the channel applies.

ch = tunneling_from_bias(3, 0.3, 0.6)
inv = channel_invariants(ch)
print("\nKraus shifts:", [op.terms[0][0] for op in ch.ops])
print("g from Kraus operators:", inv.g, " closed form:", g_function(0.3, 3, 0.6))
