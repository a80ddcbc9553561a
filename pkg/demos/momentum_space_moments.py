"""
Moments from momentum space
===========================

Translation invariance makes the walk block diagonal in quasi-momentum k.  In
the Bloch basis one step on the coin is the real 4x4 transfer matrix W_k, and
the first two moments of position are averages over k of sums of powers of
W_k.  The integrands are trigonometric polynomials, so an even grid of more
than 4t points evaluates them exactly.
"""

import numpy as np

from dqwalk import HADAMARD, pure_shift_channel, run
from dqwalk.analytic import (
    asymptotic_matrices,
    gamma1,
    spectral_moment_oracle,
    transfer_power_sums,
)
from dqwalk.core import bloch_of_state, walk_transfer_matrix

np.set_printoptions(precision=4, suppress=True)

print("W_k at k = pi/8:")
print(walk_transfer_matrix(HADAMARD, np.pi / 8))

###############################################################################
# Any coin, any pure-shift channel: the oracle and the density-matrix
# simulation agree to rounding.

rng = np.random.default_rng(3)
theta = rng.uniform(0, np.pi)
coin = np.array([[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])
psi = np.array([0.6, 0.8j])
channel = pure_shift_channel([(0, 0.6), (2, 0.3), (-1, 0.1)])
rec = run(coin, channel, psi, 25)[-1]
mean, m2 = spectral_moment_oracle(coin, channel, bloch_of_state(psi), 25)
print(f"\nt=25  simulator <x>={rec.mean:.10f} <x^2>={rec.second_moment:.6f}")
print(f"      oracle    <x>={mean:.10f} <x^2>={m2:.6f}")

###############################################################################
# For the Hadamard coin the averaged power sum grows like t A - B.  The
# approach is slow: the remainder decays only like t^(-1/2), because the
# eigenphases of W_k are stationary at isolated k.

A, B, C = asymptotic_matrices(HADAMARD)
print("\nA =\n", A, "\nB =\n", B)
for t in (10, 100, 1000):
    s1, _, _ = transfer_power_sums(HADAMARD, t)
    print(f"t={t:5d}  max |S1 - (tA - B)| = {np.abs(s1 - gamma1(t)).max():.4f}")
