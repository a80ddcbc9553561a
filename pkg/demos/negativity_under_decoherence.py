"""
Coin-position entanglement under decoherence
============================================

The walk entangles the coin with the position.  We measure it by the
negativity of the partial transpose over the coin.  Tunneling noise lowers
the entanglement but does not destroy it; the curves level off.
"""

import numpy as np

from dqwalk import HADAMARD, coherent_channel, init_state, negativity, step, tunneling_from_bias

psi = np.array([1, 1j]) / np.sqrt(2)
t_max = 50

###############################################################################
# Keep the total tunneling probability P_t = P^d fixed at 1/4 while the hop
# length grows.

P_t = 0.25
channels = {"coherent": coherent_channel()}
channels.update({f"d={d}": tunneling_from_bias(d, 0.5, P_t ** (1 / d)) for d in (1, 2, 3)})

checkpoints = (10, 20, 30, 40, 50)
print("t    " + "".join(f"{name:>10s}" for name in channels))
curves = {}
for name, ch in channels.items():
    state = init_state(psi, t_max, ch)
    for t in range(1, t_max + 1):
        state = step(state, HADAMARD, ch)
        if t in checkpoints:
            curves.setdefault(name, []).append(negativity(state.rho))
for i, t in enumerate(checkpoints):
    print(f"{t:<4d} " + "".join(f"{curves[name][i]:10.4f}" for name in channels))

###############################################################################
# A product state has zero negativity, and a maximally entangled two-site
# state gives 1/2.

amp = np.zeros((3, 2), dtype=complex)
amp[0, 0] = amp[2, 1] = np.sqrt(0.5)
rho = np.einsum("xc,yd->xcyd", amp, amp.conj())
print("\n(|-1,L> + |+1,R>)/sqrt(2):", round(negativity(rho), 12))
